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

// Command-line entry point: instrument, ground, simulate, generate, export,
// stats and train-eval.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ambisim/common.hpp"
#include "ambisim/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ambisim;
using nlohmann::json;

namespace {

script::Script load_canonical_script(const std::string& path) {
  auto parsed = script::parse_script(pipeline::read_text_file(path));
  if (!parsed.diagnostics.empty()) {
    std::ostringstream msg;
    for (const auto& d : parsed.diagnostics) {
      msg << "\n  " << path << ":" << d.line << ":" << d.column << ": "
          << script::to_string(d.kind) << ": " << d.message;
    }
    throw std::runtime_error("script has " + std::to_string(parsed.diagnostics.size()) +
                             " diagnostic(s):" + msg.str());
  }
  if (parsed.script.empty()) throw std::runtime_error(path + ": script has no steps");
  return parsed.script;
}

sim::SimParams sim_params(double dt, double speed, const std::string& date) {
  sim::SimParams p;
  p.dt = dt;
  p.walk_speed = speed;
  p.epoch_date = parse_date(date);
  p.validate();
  return p;
}

std::string trajectory_csv(const sim::Trajectory& traj) {
  std::string out = "t,x,y,z,step_index\n";
  out.reserve(traj.samples.size() * 64);
  char buf[160];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%d\n", format_timestamp(s.t).c_str(),
                  s.position.x, s.position.y, s.position.z, s.step_index);
    out += buf;
  }
  return out;
}

std::string transitions_jsonl(const sim::StateTransitionLog& log) {
  std::string out;
  for (const auto& t : log) {
    out += json{{"t", format_timestamp(t.transition.timestamp)},
                {"step", t.step_index + 1},
                {"object", t.transition.object_id},
                {"class", t.transition.object_class},
                {"room", t.transition.room},
                {"from", std::string(env::to_string(t.transition.from_state))},
                {"to", std::string(env::to_string(t.transition.to_state))}}
               .dump() +
           "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ambisim: smart-home ambient sensor data generator and activity-recognition baseline"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "error|warn|info|debug (JSON lines on stderr)")
      ->capture_default_str();

  // instrument
  auto* instrument = app.add_subcommand("instrument", "Place sensors in a layout and write the sensor map");
  std::string i_layout, i_out;
  double i_radius = sensors::kDefaultRadius;
  instrument->add_option("--layout", i_layout, "Layout JSON")->required();
  instrument->add_option("--out", i_out, "Sensor map JSON")->required();
  instrument->add_option("--radius", i_radius, "Motion detection radius (m)")->capture_default_str();

  // ground
  auto* ground = app.add_subcommand("ground", "Ground a free-form schedule into an action script");
  std::string g_layout, g_vocab, g_script, g_out, g_report;
  grounding::GroundingThresholds g_thr;
  std::size_t g_dim = 128;
  ground->add_option("--layout", g_layout, "Layout JSON")->required();
  ground->add_option("--vocab", g_vocab, "Vocabulary JSON")->required();
  ground->add_option("--script", g_script, "Raw schedule text")->required();
  ground->add_option("--out", g_out, "Grounded action script")->required();
  ground->add_option("--report", g_report, "Grounding report JSON");
  ground->add_option("--tau-act", g_thr.tau_act, "Action similarity threshold")->capture_default_str();
  ground->add_option("--tau-obj", g_thr.tau_obj, "Object similarity threshold")->capture_default_str();
  ground->add_option("--max-retries", g_thr.max_retries, "Repair attempts per line")->capture_default_str();
  ground->add_option("--embedding-dim", g_dim, "Dimension of the built-in embedding")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Simulate an action script");
  std::string s_layout, s_script, s_traj, s_trans, s_date = "2024-01-01";
  double s_dt = 0.2, s_speed = 1.2;
  simulate->add_option("--layout", s_layout, "Layout JSON")->required();
  simulate->add_option("--script", s_script, "Action script")->required();
  simulate->add_option("--dt", s_dt, "Sampling interval (s)")->capture_default_str();
  simulate->add_option("--speed", s_speed, "Walking speed (m/s)")->capture_default_str();
  simulate->add_option("--date", s_date, "Calendar date of day 0")->capture_default_str();
  simulate->add_option("--out-traj", s_traj, "Trajectory CSV")->required();
  simulate->add_option("--out-transitions", s_trans, "State transitions (JSON lines)");

  // generate
  auto* generate = app.add_subcommand("generate", "Run the full generation pipeline from a config");
  std::string c_config;
  std::optional<std::string> c_out, c_date;
  std::optional<std::uint64_t> c_seed;
  std::optional<std::size_t> c_jobs;
  std::optional<double> c_dt, c_speed, c_tau_act, c_tau_obj, c_radius;
  std::optional<int> c_retries;
  generate->add_option("--config", c_config, "Pipeline config JSON")->required();
  generate->add_option("--out", c_out, "Output directory");
  generate->add_option("--seed", c_seed, "Seed recorded in every output");
  generate->add_option("--jobs", c_jobs, "Worker threads");
  generate->add_option("--dt", c_dt, "Sampling interval (s)");
  generate->add_option("--speed", c_speed, "Walking speed (m/s)");
  generate->add_option("--date", c_date, "Date of the first script");
  generate->add_option("--tau-act", c_tau_act, "Action similarity threshold");
  generate->add_option("--tau-obj", c_tau_obj, "Object similarity threshold");
  generate->add_option("--max-retries", c_retries, "Repair attempts per line");
  generate->add_option("--radius", c_radius, "Motion detection radius (m)");

  // export
  auto* exp = app.add_subcommand("export", "Simulate an action script and export its sensor events");
  std::string e_layout, e_script, e_mapping, e_out, e_format = "casas", e_date = "2024-01-01";
  double e_dt = 0.2, e_speed = 1.2;
  exp->add_option("--layout", e_layout, "Layout JSON")->required();
  exp->add_option("--script", e_script, "Action script")->required();
  exp->add_option("--mapping", e_mapping, "Label mapping JSON")->required();
  exp->add_option("--format", e_format, "casas|jsonl")
      ->check(CLI::IsMember({"casas", "jsonl"}))
      ->capture_default_str();
  exp->add_option("--out", e_out, "Output file")->required();
  exp->add_option("--dt", e_dt, "Sampling interval (s)")->capture_default_str();
  exp->add_option("--speed", e_speed, "Walking speed (m/s)")->capture_default_str();
  exp->add_option("--date", e_date, "Calendar date of day 0")->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics over windows JSONL files");
  std::vector<std::string> st_windows;
  std::string st_out;
  stats->add_option("--windows", st_windows, "Windows JSONL (repeatable)")->required();
  stats->add_option("--out", st_out, "Report JSON (stdout when omitted)");

  // train-eval
  auto* te = app.add_subcommand("train-eval", "Compare real-only and virtual-pretrained classifiers");
  pipeline::TrainEvalOptions t_opt;
  std::vector<double> t_fractions{0.05};
  std::size_t t_seeds = 5;
  std::uint64_t t_seed_base = 0;
  std::string t_variant = "temporal", t_optimizer = "sgd";
  auto& tc = t_opt.protocol.train;
  te->add_option("--virtual", t_opt.virtual_paths, "Virtual windows JSONL (repeatable)");
  te->add_option("--real", t_opt.real_path, "Real windows JSONL")->required();
  te->add_option("--real-fraction", t_fractions, "Fractions of real training data")
      ->delimiter(',')
      ->capture_default_str();
  te->add_option("--folds", t_opt.protocol.folds, "Stratified folds")->capture_default_str();
  te->add_option("--seeds", t_seeds, "Number of seeds")->capture_default_str();
  te->add_option("--seed", t_seed_base, "First seed")->capture_default_str();
  te->add_option("--variant", t_variant, "basic|temporal")
      ->check(CLI::IsMember({"basic", "temporal"}))
      ->capture_default_str();
  te->add_option("--dim", t_opt.dimension, "Feature dimension")->capture_default_str();
  te->add_option("--epochs", tc.epochs, "Epochs per stage")->capture_default_str();
  te->add_option("--lr", tc.learning_rate, "Learning rate")->capture_default_str();
  te->add_option("--weight-decay", tc.weight_decay, "Weight decay")->capture_default_str();
  te->add_option("--batch-size", tc.batch_size, "Mini-batch size")->capture_default_str();
  te->add_option("--patience", tc.patience, "Early-stop patience (0 disables)")->capture_default_str();
  te->add_option("--optimizer", t_optimizer, "sgd|adam")
      ->check(CLI::IsMember({"sgd", "adam"}))
      ->capture_default_str();
  te->add_flag("--mix", t_opt.protocol.mix, "Fine-tune on virtual + real combined");
  te->add_option("--jobs", t_opt.jobs, "Worker threads")->capture_default_str();
  te->add_option("--out", t_opt.out_json, "Metrics JSON");
  te->add_option("--table", t_opt.out_table, "Aligned text table");
  te->add_option("--model-out", t_opt.model_out, "Model trained on all data (JSON)");

  CLI11_PARSE(app, argc, argv);

  const auto level = pipeline::log_level_from_string(log_level);
  if (!level) {
    std::cerr << "error: unknown --log-level '" << log_level << "'\n";
    return 2;
  }
  const pipeline::Logger logger(*level);

  try {
    if (*instrument) {
      const auto layout = env::load_layout_file(i_layout);
      const auto suite = sensors::instrument(layout, i_radius);
      auto j = sensors::sensor_map_json(suite);
      j["home"] = layout.name;
      pipeline::write_text_file(i_out, j.dump(2) + "\n");
      std::cerr << "instrumented '" << layout.name << "': " << suite.motion.size() << " motion, "
                << suite.doors.size() << " door, " << suite.devices.size() << " device sensors\n";
    } else if (*ground) {
      g_thr.validate();
      const auto layout = env::load_layout_file(g_layout);
      const auto vocab = grounding::load_vocabulary_file(g_vocab);
      std::unique_ptr<grounding::EmbeddingProvider> provider =
          grounding::HttpEmbeddingProvider::from_environment();
      if (!provider) provider = std::make_unique<grounding::HashEmbeddingProvider>(g_dim);
      grounding::Grounder grounder(*provider, grounding::build_action_index(vocab, *provider),
                                   grounding::build_object_index(layout, vocab, *provider), g_thr);
      grounding::NullRepairProvider no_repair;
      const auto result = grounder.ground_script(pipeline::read_text_file(g_script), no_repair);
      pipeline::write_text_file(g_out, script::render_script(result.script));
      if (!g_report.empty()) pipeline::write_text_file(g_report, result.report.to_json().dump(2) + "\n");
      std::cerr << "grounded " << result.script.size() << " step(s): " << result.report.accepted()
                << " accepted, " << result.report.repaired() << " repaired, "
                << result.report.discarded() << " discarded, " << result.report.dropped_unrecognized
                << " unrecognized line(s) dropped\n";
    } else if (*simulate) {
      const auto layout = env::load_layout_file(s_layout);
      const auto script = load_canonical_script(s_script);
      const auto result = sim::simulate(script, layout, sim_params(s_dt, s_speed, s_date));
      pipeline::write_text_file(s_traj, trajectory_csv(result.trajectory));
      if (!s_trans.empty()) pipeline::write_text_file(s_trans, transitions_jsonl(result.transitions));
      for (const auto& is : result.issues) {
        logger.log(is.severity == sim::Severity::Error ? pipeline::LogLevel::Error
                                                       : pipeline::LogLevel::Warn,
                   is.message, {{"step", is.step_index + 1}, {"script", s_script}});
      }
      std::cerr << "simulated " << script.size() << " step(s): " << result.trajectory.samples.size()
                << " samples, " << result.transitions.size() << " transition(s), "
                << result.issues.size() << " issue(s)\n";
    } else if (*generate) {
      auto config = pipeline::PipelineConfig::from_file(c_config);
      if (c_out) config.output_dir = *c_out;
      if (c_seed) config.seed = *c_seed;
      if (c_jobs) config.jobs = *c_jobs;
      if (c_dt) config.sim.dt = *c_dt;
      if (c_speed) config.sim.walk_speed = *c_speed;
      if (c_date) config.sim.epoch_date = parse_date(*c_date);
      if (c_tau_act) config.thresholds.tau_act = *c_tau_act;
      if (c_tau_obj) config.thresholds.tau_obj = *c_tau_obj;
      if (c_retries) config.thresholds.max_retries = *c_retries;
      if (c_radius) config.sensor_radius = *c_radius;
      const auto report = pipeline::run_generate(config, logger);
      const auto& m = report.merged;
      std::cerr << "generated " << m.window_count << " window(s) from " << report.homes.size()
                << " home(s) into " << config.output_dir.string() << " (triggers per window: min "
                << m.min_triggers << ", max " << m.max_triggers << ", mean " << m.mean_triggers
                << "); config " << config.hash() << ", seed " << config.seed << "\n";
      if (report.fatal_errors > 0) {
        std::cerr << report.fatal_errors << " script(s) failed; outputs are partial (see manifest.json)\n";
        return 1;
      }
    } else if (*exp) {
      const auto layout = env::load_layout_file(e_layout);
      const auto script = load_canonical_script(e_script);
      const auto mapping = dataset::LabelMapping::from_file(e_mapping);
      const auto suite = sensors::instrument(layout);
      const auto sensed =
          pipeline::simulate_and_sense(script, layout, suite, sim_params(e_dt, e_speed, e_date));
      if (e_format == "casas") {
        dataset::export_casas(sensed.events, sensed.spans, mapping, e_out);
        std::cerr << "exported " << sensed.events.size() << " event(s)\n";
      } else {
        const auto seg = dataset::segment_windows(
            sensed.events, sensed.spans, mapping,
            {script.metadata.persona, layout.name, e_date});
        std::ostringstream out;
        dataset::write_windows_jsonl(out, seg.windows);
        pipeline::write_text_file(e_out, out.str());
        std::cerr << "exported " << seg.windows.size() << " window(s), " << seg.dropped_spans
                  << " empty span(s) dropped\n";
      }
    } else if (*stats) {
      std::vector<dataset::ActivityWindow> windows;
      for (const auto& p : st_windows) {
        auto w = dataset::read_windows_jsonl_file(p);
        windows.insert(windows.end(), w.begin(), w.end());
      }
      auto j = dataset::compute_stats(windows).to_json();
      j["sources"] = st_windows;
      if (st_out.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        pipeline::write_text_file(st_out, j.dump(2) + "\n");
      }
    } else if (*te) {
      t_opt.variant = *dataset::variant_from_string(t_variant);
      tc.optimizer = *har::optimizer_from_string(t_optimizer);
      tc.seed = t_seed_base;
      t_opt.protocol.fractions = t_fractions;
      t_opt.protocol.seeds.clear();
      for (std::size_t i = 0; i < t_seeds; ++i) t_opt.protocol.seeds.push_back(t_seed_base + i);
      const auto result = pipeline::run_train_eval(t_opt, logger);
      std::cout << result.table(t_opt.protocol);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
