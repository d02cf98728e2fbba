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

#pragma once

// Labeled activity windows over sensor event streams, textual encodings of
// sensor triggers, CASAS-style event logs and corpus statistics.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ambisim/common.hpp"
#include "ambisim/sensors.hpp"

namespace ambisim::dataset {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxWindowEvents = 100;
inline constexpr std::string_view kOtherLabel = "Other";

/// Half-open [start, end) interval of one scheduled activity.
struct ActivitySpan {
  std::string activity_name;
  Timestamp start;
  Timestamp end;
  std::string room;

  friend bool operator==(const ActivitySpan&, const ActivitySpan&) = default;
  bool contains(Timestamp t) const { return start <= t && t < end; }
};

/// Activity-name -> target-dataset label; misses map to "Other".
class LabelMapping {
 public:
  LabelMapping() = default;
  LabelMapping(std::string dataset, const std::map<std::string, std::string>& entries);

  static LabelMapping from_json(const nlohmann::json& document);
  static LabelMapping from_file(const std::string& path);
  nlohmann::json to_json() const;

  const std::string& dataset() const { return dataset_; }
  /// Every label the mapping can return, "Other" included.
  std::set<std::string> label_set() const;
  std::string map(std::string_view activity_name) const;

 private:
  std::string dataset_;
  std::map<std::string, std::string> entries_;  // normalized key -> label
};

/// Lowercase with spaces and hyphens folded to '_'.
std::string normalize_activity(std::string_view name);

std::string map_label(std::string_view activity_name, const LabelMapping& mapping);

struct WindowSource {
  std::string persona;
  std::string home;
  std::string day;

  friend bool operator==(const WindowSource&, const WindowSource&) = default;
};

struct ActivityWindow {
  std::string label;
  ActivitySpan span;
  std::vector<sensors::SensorEvent> events;
  WindowSource source;

  friend bool operator==(const ActivityWindow&, const ActivityWindow&) = default;
};

struct Segmentation {
  std::vector<ActivityWindow> windows;
  std::size_t dropped_spans = 0;
};

/// Windows per span: the first 100 in-span events, labeled through the
/// mapping. Empty spans are dropped and counted. Throws DatasetError when
/// spans overlap.
Segmentation segment_windows(const std::vector<sensors::SensorEvent>& events,
                             const std::vector<ActivitySpan>& spans, const LabelMapping& mapping,
                             const WindowSource& source = {});

enum class TdostVariant { Basic, Temporal };

std::string_view to_string(TdostVariant variant);
std::optional<TdostVariant> variant_from_string(std::string_view s);

/// "Motion sensor in bedroom fired with value ON"
std::string tdost_basic(const sensors::SensorEvent& event);
/// Basic sentence plus " at <hour words> hours <minute words> minutes AM|PM".
std::string tdost_temporal(const sensors::SensorEvent& event);
std::string tdost(const sensors::SensorEvent& event, TdostVariant variant);
/// English words for 0..59, compounds space separated ("forty five").
std::string number_words(int n);

// --- CASAS log --------------------------------------------------------------

struct CasasRecord {
  Timestamp timestamp;
  std::string sensor_id;
  std::string value;

  friend bool operator==(const CasasRecord&, const CasasRecord&) = default;
};

struct CasasAnnotation {
  std::string label;
  std::size_t first = 0;  // record index carrying "begin"
  std::size_t last = 0;   // record index carrying "end"

  friend bool operator==(const CasasAnnotation&, const CasasAnnotation&) = default;
};

struct CasasLog {
  std::vector<CasasRecord> records;
  std::vector<CasasAnnotation> annotations;

  friend bool operator==(const CasasLog&, const CasasLog&) = default;
};

/// `YYYY-MM-DD HH:MM:SS.ffffff\tID\tVALUE`, plus `\tLABEL\tbegin` on a span's
/// first event and `\tLABEL\tend` on its last (both on a one-event span).
CasasLog build_casas_log(const std::vector<sensors::SensorEvent>& events,
                         const std::vector<ActivitySpan>& spans, const LabelMapping& mapping);
void write_casas(std::ostream& out, const CasasLog& log);
CasasLog read_casas(std::istream& in);
/// Writes the log for `events` to `path`; throws DatasetError if unwritable.
void export_casas(const std::vector<sensors::SensorEvent>& events,
                  const std::vector<ActivitySpan>& spans, const LabelMapping& mapping,
                  const std::string& path);

// --- statistics -------------------------------------------------------------

struct DatasetStats {
  std::size_t window_count = 0;
  std::size_t total_triggers = 0;
  std::size_t min_triggers = 0;
  std::size_t max_triggers = 0;
  double mean_triggers = 0.0;
  std::map<std::string, std::size_t> per_label;
  std::map<std::string, std::size_t> per_kind;

  nlohmann::json to_json() const;
};

DatasetStats compute_stats(const std::vector<ActivityWindow>& windows);

// --- windows JSONL ----------------------------------------------------------

nlohmann::json window_to_json(const ActivityWindow& window);
ActivityWindow window_from_json(const nlohmann::json& record);
void write_windows_jsonl(std::ostream& out, const std::vector<ActivityWindow>& windows);
std::vector<ActivityWindow> read_windows_jsonl(std::istream& in);
std::vector<ActivityWindow> read_windows_jsonl_file(const std::string& path);

}  // namespace ambisim::dataset
