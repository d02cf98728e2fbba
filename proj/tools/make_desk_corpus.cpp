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

// Writes synthetic day schedules (raw chat-model style text) for a set of
// layouts: <out>/<home>/dayNN.txt.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ambisim/corpus.hpp"
#include "ambisim/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate day-schedule text files for a set of layouts"};
  std::vector<std::string> layouts;
  std::string out_dir;
  int days = 3;
  std::uint64_t seed = 0;
  std::string persona = "resident";
  app.add_option("--layout", layouts, "Layout JSON (repeatable)")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--days", days, "Days per layout")->check(CLI::Range(1, 999))->capture_default_str();
  app.add_option("--seed", seed, "Seed")->capture_default_str();
  app.add_option("--persona", persona, "Persona line written into each schedule")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& path : layouts) {
      const auto layout = ambisim::env::load_layout_file(path);
      for (int d = 1; d <= days; ++d) {
        char name[32];
        std::snprintf(name, sizeof name, "day%02d.txt", d);
        const auto text = ambisim::corpus::synthesize_day(layout, {persona, d, seed});
        ambisim::pipeline::write_text_file(std::filesystem::path(out_dir) / layout.name / name, text);
      }
      std::cerr << "wrote " << days << " schedule(s) for '" << layout.name << "'\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
