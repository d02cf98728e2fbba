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

// End-to-end wiring: ground -> simulate -> sense -> window -> export, plus the
// train/evaluate comparison. Shared by the command-line tool and the tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ambisim/action_script.hpp"
#include "ambisim/dataset.hpp"
#include "ambisim/env.hpp"
#include "ambisim/grounding.hpp"
#include "ambisim/har.hpp"
#include "ambisim/sensors.hpp"
#include "ambisim/sim.hpp"

namespace ambisim::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { Error, Warn, Info, Debug };

std::optional<LogLevel> log_level_from_string(std::string_view s);

/// Structured logging: one JSON object per line.
class Logger {
 public:
  explicit Logger(LogLevel level = LogLevel::Info, std::ostream* sink = nullptr);
  void log(LogLevel level, std::string_view message, nlohmann::json fields = {}) const;
  LogLevel level() const { return level_; }

 private:
  LogLevel level_;
  std::ostream* sink_;
};

struct HomeSpec {
  std::string layout;                // path as written in the config
  std::vector<std::string> scripts;  // files, or directories of *.txt files
  std::string persona = "resident";
};

struct PipelineConfig {
  std::vector<HomeSpec> homes;
  std::string vocabulary;
  std::string label_mapping;
  std::filesystem::path output_dir = "out";
  std::filesystem::path base_dir = ".";  // relative input paths resolve here
  std::uint64_t seed = 0;
  sim::SimParams sim;
  grounding::GroundingThresholds thresholds;
  std::size_t embedding_dim = 128;
  double sensor_radius = sensors::kDefaultRadius;
  std::size_t jobs = 1;

  static PipelineConfig from_json(const nlohmann::json& document,
                                  const std::filesystem::path& base_dir = ".");
  static PipelineConfig from_file(const std::filesystem::path& path);

  std::filesystem::path resolve(const std::string& path) const;
  /// Script files of one home, directories expanded (sorted).
  std::vector<std::filesystem::path> script_files(const HomeSpec& home) const;

  /// Checks parameters and that every referenced input exists.
  void validate() const;
  /// Everything that determines the outputs; excludes output_dir and jobs.
  nlohmann::json to_json() const;
  /// Hex FNV-1a of the canonical to_json() dump.
  std::string hash() const;
};

/// Contiguous runs of steps sharing an activity name, timed by the step windows.
std::vector<dataset::ActivitySpan> activity_spans(const script::Script& script,
                                                  const std::vector<sim::StepWindow>& windows);

struct SensedScript {
  sim::SimResult sim;
  std::vector<sensors::SensorEvent> events;
  std::vector<dataset::ActivitySpan> spans;
};

/// simulate -> motion triggers + door/device events -> merged stream + spans.
SensedScript simulate_and_sense(const script::Script& script, const env::HomeLayout& layout,
                                const sensors::SensorSuite& suite, const sim::SimParams& params);

struct ScriptOutcome {
  std::string script;  // path as listed
  std::string day;     // YYYY-MM-DD
  bool fatal = false;
  std::string error;
  grounding::GroundingReport grounding;
  std::vector<sim::StepIssue> issues;
  std::vector<sensors::SensorEvent> events;
  std::vector<dataset::ActivitySpan> spans;
  std::vector<dataset::ActivityWindow> windows;
  std::size_t dropped_spans = 0;
};

struct HomeOutcome {
  std::string home;
  std::vector<ScriptOutcome> scripts;
};

struct GenerateReport {
  std::vector<HomeOutcome> homes;
  std::size_t fatal_errors = 0;
  std::vector<std::filesystem::path> files;
  dataset::DatasetStats merged;
};

/// Runs the whole generation pipeline and writes per-home outputs
/// (events.casas, windows.jsonl, sensors.json, stats.json, grounding.json)
/// plus merged windows.jsonl, stats.json and manifest.json in output_dir.
GenerateReport run_generate(const PipelineConfig& config, const Logger& logger = Logger());

struct TrainEvalOptions {
  std::vector<std::string> virtual_paths;
  std::string real_path;
  dataset::TdostVariant variant = dataset::TdostVariant::Temporal;
  std::size_t dimension = har::kDefaultDimension;
  har::ProtocolConfig protocol;
  std::size_t jobs = 1;
  std::string out_json;
  std::string out_table;
  std::string model_out;
};

har::ProtocolResult run_train_eval(const TrainEvalOptions& options, const Logger& logger = Logger());

/// Writes `text` to `path` byte-exactly (binary mode, creating parents).
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ambisim::pipeline
