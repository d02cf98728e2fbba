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

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "ambisim/dataset.hpp"

namespace ambisim::dataset {

CasasLog build_casas_log(const std::vector<sensors::SensorEvent>& events,
                         const std::vector<ActivitySpan>& spans, const LabelMapping& mapping) {
  CasasLog log;
  log.records.reserve(events.size());
  for (const auto& e : events) {
    log.records.push_back({e.timestamp, e.sensor_id, std::string(sensors::to_string(e.value))});
  }
  std::vector<ActivitySpan> ordered = spans;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ActivitySpan& a, const ActivitySpan& b) { return a.start < b.start; });
  for (const auto& span : ordered) {
    std::optional<std::size_t> first, last;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (!span.contains(events[i].timestamp)) continue;
      if (!first) first = i;
      last = i;
    }
    if (first) log.annotations.push_back({mapping.map(span.activity_name), *first, *last});
  }
  return log;
}

void write_casas(std::ostream& out, const CasasLog& log) {
  std::vector<std::string> extras(log.records.size());
  for (const auto& a : log.annotations) {
    if (a.first >= log.records.size() || a.last >= log.records.size() || a.first > a.last) {
      throw DatasetError("annotation '" + a.label + "' has an invalid record range");
    }
    extras[a.first] += "\t" + a.label + "\tbegin";
    extras[a.last] += "\t" + a.label + "\tend";
  }
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    out << format_timestamp(r.timestamp) << '\t' << r.sensor_id << '\t' << r.value << extras[i]
        << '\n';
  }
}

CasasLog read_casas(std::istream& in) {
  CasasLog log;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<std::string, std::size_t>> open;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const auto where = "CASAS line " + std::to_string(line_no) + ": ";
    if (fields.size() < 3 || (fields.size() - 3) % 2 != 0) {
      throw DatasetError(where + "expected timestamp, sensor, value and label/marker pairs");
    }
    CasasRecord record;
    try {
      record.timestamp = parse_timestamp(fields[0]);
    } catch (const std::invalid_argument& e) {
      throw DatasetError(where + e.what());
    }
    record.sensor_id = fields[1];
    record.value = fields[2];
    const std::size_t index = log.records.size();
    log.records.push_back(std::move(record));
    for (std::size_t k = 3; k < fields.size(); k += 2) {
      const auto& label = fields[k];
      const auto& marker = fields[k + 1];
      if (marker == "begin") {
        if (open) throw DatasetError(where + "'" + label + "' begins inside '" + open->first + "'");
        open = std::make_pair(label, index);
      } else if (marker == "end") {
        if (!open || open->first != label) {
          throw DatasetError(where + "'" + label + " end' without a matching begin");
        }
        log.annotations.push_back({label, open->second, index});
        open.reset();
      } else {
        throw DatasetError(where + "unknown marker '" + marker + "'");
      }
    }
  }
  if (open) throw DatasetError("CASAS log ends inside '" + open->first + "'");
  return log;
}

void export_casas(const std::vector<sensors::SensorEvent>& events,
                  const std::vector<ActivitySpan>& spans, const LabelMapping& mapping,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(path + ": cannot open for writing");
  write_casas(out, build_casas_log(events, spans, mapping));
  if (!out) throw DatasetError(path + ": write failed");
}

}  // namespace ambisim::dataset
