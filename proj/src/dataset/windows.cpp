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

#include "ambisim/dataset.hpp"

namespace ambisim::dataset {

using nlohmann::json;

std::string normalize_activity(std::string_view name) {
  std::string out;
  for (char c : trim(name)) {
    if (c == ' ' || c == '-') c = '_';
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

LabelMapping::LabelMapping(std::string dataset, const std::map<std::string, std::string>& entries)
    : dataset_(std::move(dataset)) {
  for (const auto& [activity, label] : entries) {
    if (label.empty()) throw DatasetError("label for '" + activity + "' is empty");
    entries_[normalize_activity(activity)] = label;
  }
}

LabelMapping LabelMapping::from_json(const json& doc) {
  if (!doc.is_object()) throw DatasetError("label mapping: expected a JSON object");
  std::string dataset = doc.value("dataset", "");
  std::map<std::string, std::string> entries;
  if (auto it = doc.find("entries"); it != doc.end()) {
    if (!it->is_object()) throw DatasetError("label mapping: entries must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw DatasetError("label mapping: entry '" + k + "' is not a string");
      entries[k] = v.get<std::string>();
    }
  }
  if (auto it = doc.find("labels"); it != doc.end()) {
    std::set<std::string> allowed;
    for (const auto& l : *it) allowed.insert(l.get<std::string>());
    for (const auto& [k, v] : entries) {
      if (!allowed.count(v) && v != kOtherLabel) {
        throw DatasetError("label mapping: '" + v + "' (for '" + k + "') is not a target label");
      }
    }
  }
  return LabelMapping(std::move(dataset), entries);
}

LabelMapping LabelMapping::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(path + ": cannot open label mapping");
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DatasetError(path + ": " + e.what());
  }
}

json LabelMapping::to_json() const {
  return {{"dataset", dataset_}, {"entries", entries_}};
}

std::set<std::string> LabelMapping::label_set() const {
  std::set<std::string> out{std::string(kOtherLabel)};
  for (const auto& [_, label] : entries_) out.insert(label);
  return out;
}

std::string LabelMapping::map(std::string_view activity_name) const {
  auto it = entries_.find(normalize_activity(activity_name));
  return it == entries_.end() ? std::string(kOtherLabel) : it->second;
}

std::string map_label(std::string_view activity_name, const LabelMapping& mapping) {
  return mapping.map(activity_name);
}

Segmentation segment_windows(const std::vector<sensors::SensorEvent>& events,
                             const std::vector<ActivitySpan>& spans, const LabelMapping& mapping,
                             const WindowSource& source) {
  std::vector<ActivitySpan> ordered = spans;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ActivitySpan& a, const ActivitySpan& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (!(ordered[i].start < ordered[i].end)) {
      throw DatasetError("span '" + ordered[i].activity_name + "' does not start before it ends");
    }
    if (i > 0 && ordered[i].start < ordered[i - 1].end) {
      throw DatasetError("spans '" + ordered[i - 1].activity_name + "' and '" +
                         ordered[i].activity_name + "' overlap");
    }
  }

  Segmentation out;
  for (const auto& span : ordered) {
    auto first = std::lower_bound(
        events.begin(), events.end(), span.start,
        [](const sensors::SensorEvent& e, Timestamp t) { return e.timestamp < t; });
    ActivityWindow window{mapping.map(span.activity_name), span, {}, source};
    for (auto it = first; it != events.end() && span.contains(it->timestamp) &&
                          window.events.size() < kMaxWindowEvents;
         ++it) {
      window.events.push_back(*it);
    }
    if (window.events.empty()) {
      ++out.dropped_spans;
      continue;
    }
    out.windows.push_back(std::move(window));
  }
  return out;
}

DatasetStats compute_stats(const std::vector<ActivityWindow>& windows) {
  DatasetStats stats;
  stats.window_count = windows.size();
  if (windows.empty()) return stats;
  stats.min_triggers = windows.front().events.size();
  for (const auto& w : windows) {
    const auto n = w.events.size();
    stats.total_triggers += n;
    stats.min_triggers = std::min(stats.min_triggers, n);
    stats.max_triggers = std::max(stats.max_triggers, n);
    ++stats.per_label[w.label];
    for (const auto& e : w.events) ++stats.per_kind[std::string(sensors::to_string(e.kind))];
  }
  stats.mean_triggers =
      static_cast<double>(stats.total_triggers) / static_cast<double>(stats.window_count);
  return stats;
}

json DatasetStats::to_json() const {
  return {{"window_count", window_count},
          {"total_triggers", total_triggers},
          {"triggers_per_window",
           {{"min", min_triggers}, {"max", max_triggers}, {"mean", mean_triggers}}},
          {"per_label", per_label},
          {"per_sensor_kind", per_kind}};
}

}  // namespace ambisim::dataset
