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

#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "ambisim/pipeline.hpp"
#include "test_support.hpp"

using namespace ambisim;
using namespace ambisim::pipeline;
using ambisim::testing::data_path;
using ambisim::testing::ScratchDir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json single_home_config() {
  return {{"homes", json::array({{{"layout", data_path("layouts/home_a.json").string()},
                                  {"scripts", data_path("scripts/breakfast_block.txt").string()},
                                  {"persona", "early riser"}}})},
          {"vocabulary", data_path("vocabulary.json").string()},
          {"label_mapping", data_path("mappings/cairo.json").string()},
          {"seed", 3}};
}

PipelineConfig config_in(const json& doc, const fs::path& out) {
  auto config = PipelineConfig::from_json(doc, data_path(""));
  config.output_dir = out;
  return config;
}

Logger quiet() {
  static std::ostringstream sink;
  return Logger(LogLevel::Error, &sink);
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("one layout and one script produce the five per-home files") {
    ScratchDir dir("pipeline");
    const auto config = config_in(single_home_config(), dir.path());
    const auto report = run_generate(config, quiet());
    CHECK(report.fatal_errors == 0);
    for (const char* f : {"events.casas", "windows.jsonl", "sensors.json", "stats.json",
                          "grounding.json"}) {
      CHECK_MESSAGE(fs::exists(dir.path() / "home_a" / f), f);
    }
    for (const char* f : {"windows.jsonl", "stats.json", "manifest.json"}) {
      CHECK_MESSAGE(fs::exists(dir.path() / f), f);
    }
    const auto stats = json::parse(read_text_file(dir.path() / "home_a" / "stats.json"));
    CHECK(stats["window_count"].get<int>() >= 1);
    CHECK(report.merged.window_count >= 1);
    const auto manifest = json::parse(read_text_file(dir.path() / "manifest.json"));
    CHECK(manifest["config_hash"] == config.hash());
    CHECK(manifest["partial"] == false);
    CHECK(manifest["files"].size() == 7);  // every output except the manifest itself
    CHECK(report.files.size() == 8);

    const auto windows = dataset::read_windows_jsonl_file((dir.path() / "windows.jsonl").string());
    CHECK(windows.size() == report.merged.window_count);
  }

  TEST_CASE("generation is byte-identical across runs and thread counts") {
    ScratchDir a("det_a"), b("det_b");
    auto ca = config_in(single_home_config(), a.path());
    auto cb = config_in(single_home_config(), b.path());
    cb.jobs = 4;
    const auto ra = run_generate(ca, quiet());
    run_generate(cb, quiet());
    for (const auto& rel : ra.files) {
      CHECK_MESSAGE(read_text_file(a.path() / rel) == read_text_file(b.path() / rel),
                    rel.string());
    }
    CHECK(ca.hash() == cb.hash());
  }

  TEST_CASE("a missing vocabulary file fails validation before any work") {
    ScratchDir dir("missing_vocab");
    auto doc = single_home_config();
    doc["vocabulary"] = (dir.path() / "nope.json").string();
    const auto config = config_in(doc, dir.path() / "out");
    CHECK_THROWS_AS(config.validate(), ConfigError);
    CHECK_THROWS_AS(run_generate(config, quiet()), ConfigError);
    CHECK_FALSE(fs::exists(dir.path() / "out"));
  }

  TEST_CASE("config parsing rejects unknown keys and bad values") {
    auto doc = single_home_config();
    doc["colour"] = "blue";
    CHECK_THROWS_AS(PipelineConfig::from_json(doc), ConfigError);
    doc = single_home_config();
    doc["sim"] = {{"dt", -1}};
    CHECK_THROWS_AS(config_in(doc, "x").validate(), ConfigError);
    doc = single_home_config();
    doc["homes"] = json::array();
    CHECK_THROWS_AS(config_in(doc, "x").validate(), ConfigError);
  }

  TEST_CASE("relative paths resolve against the config directory") {
    const auto config = PipelineConfig::from_file(data_path("desk_config.json"));
    CHECK_NOTHROW(config.validate());
    CHECK(config.homes.size() == 3);
    CHECK(config.script_files(config.homes[0]).size() == 3);
    CHECK(config.resolve("vocabulary.json") == data_path("vocabulary.json"));
    auto other = config;
    other.output_dir = "elsewhere";
    other.jobs = 8;
    CHECK(other.hash() == config.hash());
    other.seed = config.seed + 1;
    CHECK(other.hash() != config.hash());
  }

  TEST_CASE("activity spans follow runs of steps with the same activity") {
    const auto script = ambisim::testing::parse_clean(
        "# activity: breakfast\n"
        "[walk] <kitchen> (07:10 - 07:10) (kitchen)\n"
        "[grab] <waterglass> (07:11 - 07:12) (kitchen)\n"
        "# activity: reading\n"
        "[walk] <bed> (07:20 - 07:21) (bedroom)\n"
        "[sit] <bed> (07:21 - 07:40) (bedroom)\n");
    const auto windows = sim::schedule_steps(script, Timestamp{0});
    const auto spans = activity_spans(script, windows);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].activity_name == "breakfast");
    CHECK(spans[0].start == windows[0].start);
    CHECK(spans[0].end == windows[2].start);
    CHECK(spans[1].activity_name == "reading");
    CHECK(spans[1].end == windows[3].end);
  }

  TEST_CASE("log levels and the structured logger") {
    CHECK(log_level_from_string("warn") == LogLevel::Warn);
    CHECK_FALSE(log_level_from_string("loud").has_value());
    std::ostringstream sink;
    Logger logger(LogLevel::Info, &sink);
    logger.log(LogLevel::Debug, "hidden");
    logger.log(LogLevel::Warn, "shown", {{"k", 1}});
    const auto line = json::parse(sink.str());
    CHECK(line["msg"] == "shown");
    CHECK(line["k"] == 1);
  }
}
