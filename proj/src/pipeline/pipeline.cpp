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
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ambisim/common.hpp"
#include "ambisim/pipeline.hpp"

namespace ambisim::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json provenance(const PipelineConfig& config) {
  return {{"config_hash", config.hash()}, {"seed", config.seed}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
T read_field(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

std::unique_ptr<grounding::EmbeddingProvider> make_provider(std::size_t dim) {
  if (auto http = grounding::HttpEmbeddingProvider::from_environment()) return http;
  return std::make_unique<grounding::HashEmbeddingProvider>(dim);
}

}  // namespace

std::optional<LogLevel> log_level_from_string(std::string_view s) {
  const auto l = to_lower(s);
  if (l == "error") return LogLevel::Error;
  if (l == "warn" || l == "warning") return LogLevel::Warn;
  if (l == "info") return LogLevel::Info;
  if (l == "debug") return LogLevel::Debug;
  return std::nullopt;
}

Logger::Logger(LogLevel level, std::ostream* sink) : level_(level), sink_(sink ? sink : &std::cerr) {}

void Logger::log(LogLevel level, std::string_view message, json fields) const {
  if (level > level_) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  static std::mutex mutex;
  json line{{"level", names[static_cast<int>(level)]}, {"msg", message}};
  if (fields.is_object()) {
    for (auto& [k, v] : fields.items()) line[k] = v;
  }
  std::lock_guard lock(mutex);
  *sink_ << line.dump() << '\n';
}

// --- configuration -----------------------------------------------------------

PipelineConfig PipelineConfig::from_json(const json& d, const fs::path& base_dir) {
  if (!d.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(d, {"homes", "vocabulary", "label_mapping", "output_dir", "seed", "sim",
                     "grounding", "sensors", "jobs"},
                 "config");
  PipelineConfig c;
  c.base_dir = base_dir;
  if (!d.contains("homes") || !d["homes"].is_array()) {
    throw ConfigError("config.homes: expected an array");
  }
  for (std::size_t i = 0; i < d["homes"].size(); ++i) {
    const auto& h = d["homes"][i];
    const auto where = "config.homes[" + std::to_string(i) + "]";
    if (!h.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(h, {"layout", "scripts", "persona"}, where);
    HomeSpec home;
    home.layout = read_field<std::string>(h, "layout", where, "");
    if (h.contains("scripts") && h["scripts"].is_string()) {
      home.scripts.push_back(h["scripts"].get<std::string>());
    } else {
      home.scripts = read_field<std::vector<std::string>>(h, "scripts", where, {});
    }
    home.persona = read_field<std::string>(h, "persona", where, home.persona);
    c.homes.push_back(std::move(home));
  }
  c.vocabulary = read_field<std::string>(d, "vocabulary", "config", "");
  c.label_mapping = read_field<std::string>(d, "label_mapping", "config", "");
  c.output_dir = read_field<std::string>(d, "output_dir", "config", c.output_dir.string());
  c.seed = read_field<std::uint64_t>(d, "seed", "config", c.seed);
  c.jobs = read_field<std::size_t>(d, "jobs", "config", c.jobs);
  if (d.contains("sim")) {
    const auto& s = d["sim"];
    reject_unknown(s, {"dt", "walk_speed", "run_speed", "jitter_eps", "epoch_date"}, "config.sim");
    c.sim.dt = read_field<double>(s, "dt", "config.sim", c.sim.dt);
    c.sim.walk_speed = read_field<double>(s, "walk_speed", "config.sim", c.sim.walk_speed);
    c.sim.run_speed = read_field<double>(s, "run_speed", "config.sim", c.sim.run_speed);
    c.sim.jitter_eps = read_field<double>(s, "jitter_eps", "config.sim", c.sim.jitter_eps);
    if (s.contains("epoch_date")) {
      try {
        c.sim.epoch_date = parse_date(read_field<std::string>(s, "epoch_date", "config.sim", ""));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config.sim.epoch_date: ") + e.what());
      }
    }
  }
  if (d.contains("grounding")) {
    const auto& g = d["grounding"];
    reject_unknown(g, {"tau_act", "tau_obj", "max_retries", "embedding_dim"}, "config.grounding");
    c.thresholds.tau_act = read_field<double>(g, "tau_act", "config.grounding", c.thresholds.tau_act);
    c.thresholds.tau_obj = read_field<double>(g, "tau_obj", "config.grounding", c.thresholds.tau_obj);
    c.thresholds.max_retries =
        read_field<int>(g, "max_retries", "config.grounding", c.thresholds.max_retries);
    c.embedding_dim = read_field<std::size_t>(g, "embedding_dim", "config.grounding", c.embedding_dim);
  }
  if (d.contains("sensors")) {
    reject_unknown(d["sensors"], {"radius"}, "config.sensors");
    c.sensor_radius = read_field<double>(d["sensors"], "radius", "config.sensors", c.sensor_radius);
  }
  return c;
}

PipelineConfig PipelineConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

fs::path PipelineConfig::resolve(const std::string& path) const {
  const fs::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<fs::path> PipelineConfig::script_files(const HomeSpec& home) const {
  std::vector<fs::path> out;
  for (const auto& s : home.scripts) {
    const auto p = resolve(s);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

void PipelineConfig::validate() const {
  if (homes.empty()) throw ConfigError("config.homes: at least one home is required");
  auto require_file = [&](const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigError(what + ": path is required");
    if (!fs::exists(resolve(path))) {
      throw ConfigError(what + ": file '" + resolve(path).string() + "' does not exist");
    }
  };
  require_file(vocabulary, "config.vocabulary");
  require_file(label_mapping, "config.label_mapping");
  std::set<std::string> names;
  for (std::size_t i = 0; i < homes.size(); ++i) {
    const auto where = "config.homes[" + std::to_string(i) + "]";
    require_file(homes[i].layout, where + ".layout");
    if (homes[i].scripts.empty()) throw ConfigError(where + ".scripts: no scripts listed");
    for (const auto& s : homes[i].scripts) require_file(s, where + ".scripts");
    if (script_files(homes[i]).empty()) throw ConfigError(where + ".scripts: no *.txt scripts found");
  }
  try {
    sim.validate();
    thresholds.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (embedding_dim == 0) throw ConfigError("config.grounding.embedding_dim must be positive");
  if (!(sensor_radius > 0.0)) throw ConfigError("config.sensors.radius must be positive");
  if (jobs == 0) throw ConfigError("config.jobs must be positive");
}

json PipelineConfig::to_json() const {
  json j_homes = json::array();
  for (const auto& h : homes) {
    j_homes.push_back({{"layout", h.layout}, {"scripts", h.scripts}, {"persona", h.persona}});
  }
  return {{"homes", j_homes},
          {"vocabulary", vocabulary},
          {"label_mapping", label_mapping},
          {"seed", seed},
          {"sim",
           {{"dt", sim.dt},
            {"walk_speed", sim.walk_speed},
            {"run_speed", sim.run_speed},
            {"jitter_eps", sim.jitter_eps},
            {"epoch_date", format_date(sim.epoch_date)}}},
          {"grounding",
           {{"tau_act", thresholds.tau_act},
            {"tau_obj", thresholds.tau_obj},
            {"max_retries", thresholds.max_retries},
            {"embedding_dim", embedding_dim}}},
          {"sensors", {{"radius", sensor_radius}}}};
}

std::string PipelineConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

// --- per-script stages -------------------------------------------------------

std::vector<dataset::ActivitySpan> activity_spans(const script::Script& script,
                                                  const std::vector<sim::StepWindow>& windows) {
  std::vector<dataset::ActivitySpan> spans;
  const auto& ctx = script.contexts();
  std::size_t i = 0;
  while (i < script.size()) {
    std::size_t j = i;
    while (j + 1 < script.size() && ctx[j + 1].activity == ctx[i].activity) ++j;
    if (!ctx[i].activity.empty() && windows[i].start < windows[j].end) {
      spans.push_back({ctx[i].activity, windows[i].start, windows[j].end, script.steps()[j].room});
    }
    i = j + 1;
  }
  return spans;
}

SensedScript simulate_and_sense(const script::Script& script, const env::HomeLayout& layout,
                                const sensors::SensorSuite& suite, const sim::SimParams& params) {
  SensedScript out;
  out.sim = sim::simulate(script, layout, params);
  out.events = sensors::merge_events({sensors::motion_triggers(out.sim.trajectory, suite, params),
                                      sensors::door_device_events(out.sim.transitions, suite)});
  out.spans = activity_spans(script, out.sim.trajectory.steps);
  return out;
}

// --- generate ----------------------------------------------------------------

GenerateReport run_generate(const PipelineConfig& config, const Logger& logger) {
  config.validate();
  const auto vocabulary = grounding::load_vocabulary_file(config.resolve(config.vocabulary).string());
  const auto mapping = dataset::LabelMapping::from_file(config.resolve(config.label_mapping).string());

  struct HomeInput {
    std::string name;
    env::HomeLayout layout;
    sensors::SensorSuite suite;
    std::vector<fs::path> scripts;
    std::vector<std::string> listed;  // script paths relative to the config
  };
  std::vector<HomeInput> inputs;
  std::set<std::string> home_names;
  for (const auto& h : config.homes) {
    HomeInput in;
    try {
      in.layout = env::load_layout_file(config.resolve(h.layout).string());
    } catch (const std::exception& e) {
      throw ConfigError(h.layout + ": " + e.what());
    }
    in.name = in.layout.name;
    if (!home_names.insert(in.name).second) {
      throw ConfigError("two homes share the layout name '" + in.name + "'");
    }
    in.suite = sensors::instrument(in.layout, config.sensor_radius);
    in.scripts = config.script_files(h);
    for (const auto& p : in.scripts) {
      in.listed.push_back(fs::relative(p, config.base_dir).generic_string());
    }
    inputs.push_back(std::move(in));
  }

  GenerateReport report;
  for (const auto& in : inputs) {
    HomeOutcome home;
    home.home = in.name;
    home.scripts.resize(in.scripts.size());
    report.homes.push_back(std::move(home));
  }

  struct Task {
    std::size_t home;
    std::size_t script;
  };
  std::vector<Task> tasks;
  for (std::size_t h = 0; h < inputs.size(); ++h) {
    for (std::size_t s = 0; s < inputs[h].scripts.size(); ++s) tasks.push_back({h, s});
  }

  auto run_task = [&](const Task& task) {
    const auto& in = inputs[task.home];
    auto& out = report.homes[task.home].scripts[task.script];
    out.script = in.listed[task.script];
    sim::SimParams params = config.sim;
    params.epoch_date = std::chrono::year_month_day(std::chrono::sys_days(config.sim.epoch_date) +
                                                    std::chrono::days(task.script));
    out.day = format_date(params.epoch_date);
    try {
      const auto text = read_text_file(in.scripts[task.script]);
      auto provider = make_provider(config.embedding_dim);
      grounding::Grounder grounder(*provider, grounding::build_action_index(vocabulary, *provider),
                                   grounding::build_object_index(in.layout, vocabulary, *provider),
                                   config.thresholds);
      grounding::NullRepairProvider no_repair;
      auto grounded = grounder.ground_script(text, no_repair);
      out.grounding = std::move(grounded.report);
      auto& script = grounded.script;
      script.metadata.persona = config.homes[task.home].persona;
      script.metadata.day = out.day;
      if (script.empty()) throw std::runtime_error("no step survived grounding");
      auto sensed = simulate_and_sense(script, in.layout, in.suite, params);
      out.issues = std::move(sensed.sim.issues);
      out.events = std::move(sensed.events);
      out.spans = std::move(sensed.spans);
      auto seg = dataset::segment_windows(out.events, out.spans, mapping,
                                          {config.homes[task.home].persona, in.name, out.day});
      out.windows = std::move(seg.windows);
      out.dropped_spans = seg.dropped_spans;
      logger.log(LogLevel::Debug, "script done",
                 {{"home", in.name}, {"script", out.script}, {"events", out.events.size()},
                  {"windows", out.windows.size()}});
    } catch (const std::exception& e) {
      out.fatal = true;
      out.error = e.what();
      logger.log(LogLevel::Error, "script failed",
                 {{"home", in.name}, {"script", out.script}, {"error", out.error}});
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) run_task(tasks[t]);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(config.jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Aggregation is single-threaded and ordered by (home, script, timestamp).
  const auto prov = provenance(config);
  const fs::path root = config.output_dir;
  auto emit = [&](const fs::path& rel, const std::string& content) {
    write_text_file(root / rel, content);
    report.files.push_back(rel);
  };
  std::vector<dataset::ActivityWindow> all_windows;
  json fatal_list = json::array();
  for (std::size_t h = 0; h < inputs.size(); ++h) {
    const auto& in = inputs[h];
    const auto& home = report.homes[h];
    std::vector<std::vector<sensors::SensorEvent>> streams;
    std::vector<dataset::ActivitySpan> spans;
    std::vector<dataset::ActivityWindow> windows;
    std::size_t dropped = 0, fatal = 0;
    json grounding_scripts = json::array();
    for (const auto& s : home.scripts) {
      json issues = json::array();
      for (const auto& is : s.issues) {
        issues.push_back({{"step", is.step_index + 1},
                          {"severity", is.severity == sim::Severity::Error ? "error" : "warning"},
                          {"message", is.message}});
      }
      json entry{{"script", s.script}, {"day", s.day}, {"report", s.grounding.to_json()},
                 {"simulation_issues", issues}};
      if (s.fatal) {
        entry["fatal"] = s.error;
        ++fatal;
        fatal_list.push_back({{"home", in.name}, {"script", s.script}, {"error", s.error}});
        grounding_scripts.push_back(std::move(entry));
        continue;
      }
      grounding_scripts.push_back(std::move(entry));
      streams.push_back(s.events);
      spans.insert(spans.end(), s.spans.begin(), s.spans.end());
      windows.insert(windows.end(), s.windows.begin(), s.windows.end());
      dropped += s.dropped_spans;
    }
    report.fatal_errors += fatal;
    const auto events = sensors::merge_events(streams);
    const fs::path dir = in.name;

    std::ostringstream casas;
    dataset::write_casas(casas, dataset::build_casas_log(events, spans, mapping));
    emit(dir / "events.casas", casas.str());

    std::ostringstream jsonl;
    dataset::write_windows_jsonl(jsonl, windows);
    emit(dir / "windows.jsonl", jsonl.str());

    json sensor_map = sensors::sensor_map_json(in.suite);
    sensor_map["home"] = in.name;
    sensor_map["provenance"] = prov;
    emit(dir / "sensors.json", dump_json(sensor_map));

    json stats = dataset::compute_stats(windows).to_json();
    stats["home"] = in.name;
    stats["scripts"] = home.scripts.size();
    stats["failed_scripts"] = fatal;
    stats["dropped_spans"] = dropped;
    stats["events"] = events.size();
    stats["provenance"] = prov;
    emit(dir / "stats.json", dump_json(stats));

    json g{{"home", in.name}, {"scripts", grounding_scripts}, {"provenance", prov}};
    emit(dir / "grounding.json", dump_json(g));

    all_windows.insert(all_windows.end(), windows.begin(), windows.end());
    logger.log(LogLevel::Info, "home done",
               {{"home", in.name}, {"scripts", home.scripts.size()}, {"windows", windows.size()},
                {"events", events.size()}, {"failed_scripts", fatal}});
  }

  std::ostringstream merged_jsonl;
  dataset::write_windows_jsonl(merged_jsonl, all_windows);
  emit("windows.jsonl", merged_jsonl.str());
  report.merged = dataset::compute_stats(all_windows);
  json merged = report.merged.to_json();
  merged["homes"] = inputs.size();
  merged["failed_scripts"] = report.fatal_errors;
  merged["provenance"] = prov;
  emit("stats.json", dump_json(merged));

  json files = json::array();
  for (const auto& rel : report.files) {
    const auto content = read_text_file(root / rel);
    files.push_back({{"path", rel.generic_string()},
                     {"bytes", content.size()},
                     {"fnv1a64", hex64(fnv1a64(content))}});
  }
  json manifest{{"config_hash", config.hash()},
                {"seed", config.seed},
                {"config", config.to_json()},
                {"partial", report.fatal_errors > 0},
                {"failed_scripts", fatal_list},
                {"files", files}};
  write_text_file(root / "manifest.json", dump_json(manifest));
  report.files.push_back("manifest.json");
  return report;
}

// --- train/eval --------------------------------------------------------------

har::ProtocolResult run_train_eval(const TrainEvalOptions& options, const Logger& logger) {
  if (options.real_path.empty()) throw ConfigError("train-eval: --real is required");
  for (const auto& p : options.virtual_paths) {
    if (!fs::exists(p)) throw ConfigError("train-eval: virtual corpus '" + p + "' does not exist");
  }
  if (!fs::exists(options.real_path)) {
    throw ConfigError("train-eval: real corpus '" + options.real_path + "' does not exist");
  }
  std::vector<dataset::ActivityWindow> virtual_windows;
  for (const auto& p : options.virtual_paths) {
    auto w = dataset::read_windows_jsonl_file(p);
    virtual_windows.insert(virtual_windows.end(), w.begin(), w.end());
  }
  const auto real_windows = dataset::read_windows_jsonl_file(options.real_path);
  auto keep_nonempty = [](std::vector<dataset::ActivityWindow> ws) {
    std::erase_if(ws, [](const auto& w) { return w.events.empty(); });
    return ws;
  };
  const auto v = har::featurize_windows(keep_nonempty(virtual_windows), options.variant,
                                        options.dimension);
  const auto r = har::featurize_windows(keep_nonempty(real_windows), options.variant,
                                        options.dimension);
  logger.log(LogLevel::Info, "train-eval start",
             {{"virtual_windows", v.size()}, {"real_windows", r.size()},
              {"variant", std::string(dataset::to_string(options.variant))}});
  auto result = har::run_protocol(v, r, options.protocol, options.jobs);
  for (const auto& w : result.warnings) logger.log(LogLevel::Warn, w);

  if (!options.out_json.empty()) {
    json j = result.to_json(options.protocol);
    j["variant"] = std::string(dataset::to_string(options.variant));
    j["dimension"] = options.dimension;
    j["virtual"] = options.virtual_paths;
    j["real"] = options.real_path;
    write_text_file(options.out_json, dump_json(j));
  }
  if (!options.out_table.empty()) write_text_file(options.out_table, result.table(options.protocol));
  if (!options.model_out.empty()) {
    const auto model = har::pretrain_finetune(v, r, options.protocol.train, options.protocol.mix);
    json j{{"model", model.to_json()},
           {"config", options.protocol.train.to_json()},
           {"seed", options.protocol.train.seed},
           {"variant", std::string(dataset::to_string(options.variant))}};
    write_text_file(options.model_out, j.dump() + "\n");
  }
  return result;
}

// --- files -------------------------------------------------------------------

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace ambisim::pipeline
