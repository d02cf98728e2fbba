// Copyright 2026 The Ambisim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <istream>
#include <ostream>

#include "ambisim/dataset.hpp"

namespace ambisim::dataset {

using nlohmann::json;

json window_to_json(const ActivityWindow& w) {
  json events = json::array();
  json basic = json::array();
  json temporal = json::array();
  for (const auto& e : w.events) {
    json ev{{"t", format_timestamp(e.timestamp)},
            {"sensor", e.sensor_id},
            {"kind", std::string(sensors::to_string(e.kind))},
            {"value", std::string(sensors::to_string(e.value))},
            {"room", e.room}};
    if (e.object_class) ev["object"] = *e.object_class;
    events.push_back(std::move(ev));
    basic.push_back(tdost_basic(e));
    temporal.push_back(tdost_temporal(e));
  }
  return {{"label", w.label},
          {"activity", w.span.activity_name},
          {"start", format_timestamp(w.span.start)},
          {"end", format_timestamp(w.span.end)},
          {"room", w.span.room},
          {"home", w.source.home},
          {"persona", w.source.persona},
          {"day", w.source.day},
          {"events", std::move(events)},
          {"tdost", {{"basic", std::move(basic)}, {"temporal", std::move(temporal)}}}};
}

ActivityWindow window_from_json(const json& r) {
  ActivityWindow w;
  try {
    w.label = r.at("label").get<std::string>();
    w.span.activity_name = r.at("activity").get<std::string>();
    w.span.start = parse_timestamp(r.at("start").get<std::string>());
    w.span.end = parse_timestamp(r.at("end").get<std::string>());
    w.span.room = r.value("room", "");
    w.source = {r.value("persona", ""), r.value("home", ""), r.value("day", "")};
    for (const auto& ev : r.at("events")) {
      sensors::SensorEvent e;
      e.timestamp = parse_timestamp(ev.at("t").get<std::string>());
      e.sensor_id = ev.at("sensor").get<std::string>();
      const auto kind = sensors::kind_from_string(ev.at("kind").get<std::string>());
      const auto value = sensors::value_from_string(ev.at("value").get<std::string>());
      if (!kind || !value) throw DatasetError("window event has unknown kind or value");
      e.kind = *kind;
      e.value = *value;
      e.room = ev.at("room").get<std::string>();
      if (ev.contains("object")) e.object_class = ev["object"].get<std::string>();
      w.events.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw DatasetError(std::string("malformed window record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DatasetError(std::string("malformed window record: ") + e.what());
  }
  return w;
}

void write_windows_jsonl(std::ostream& out, const std::vector<ActivityWindow>& windows) {
  for (const auto& w : windows) out << window_to_json(w).dump() << '\n';
}

std::vector<ActivityWindow> read_windows_jsonl(std::istream& in) {
  std::vector<ActivityWindow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(window_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw DatasetError("windows line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ActivityWindow> read_windows_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(path + ": cannot open windows file");
  return read_windows_jsonl(in);
}

}  // namespace ambisim::dataset
