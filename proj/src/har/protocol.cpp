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
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ambisim/common.hpp"
#include "ambisim/har.hpp"

namespace ambisim::har {

using nlohmann::json;

namespace {

std::map<std::string, std::vector<std::size_t>> group_by_label(
    const std::vector<std::string>& labels, const std::vector<std::size_t>& indices) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i : indices) groups[labels.at(i)].push_back(i);
  return groups;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

Dataset select(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(data[i]);
  return out;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

FoldPlan stratified_folds(const std::vector<std::string>& labels, std::size_t k,
                          std::uint64_t seed) {
  if (k < 2) throw HarError("stratified folds need k >= 2");
  FoldPlan plan;
  plan.folds.resize(k);
  std::uint64_t rng = seed;
  // Members of each class in shuffled order, split round-robin over folds.
  std::vector<std::vector<std::vector<std::size_t>>> by_fold;  // class -> fold -> members
  for (auto& [label, members] : group_by_label(labels, iota_indices(labels.size()))) {
    shuffle_in_place(members, rng);
    if (members.size() < k) {
      plan.train_only.insert(plan.train_only.end(), members.begin(), members.end());
      plan.warnings.push_back("class '" + label + "' has " + std::to_string(members.size()) +
                              " member(s), fewer than k=" + std::to_string(k) +
                              "; routed to train only");
      continue;
    }
    std::vector<std::vector<std::size_t>> parts(k);
    for (std::size_t j = 0; j < members.size(); ++j) parts[j % k].push_back(members[j]);
    by_fold.push_back(std::move(parts));
  }
  for (std::size_t f = 0; f < k; ++f) {
    Fold& fold = plan.folds[f];
    for (const auto& parts : by_fold) {
      fold.test.insert(fold.test.end(), parts[f].begin(), parts[f].end());
      std::vector<std::size_t> rest;
      for (std::size_t g = 0; g < k; ++g) {
        if (g != f) rest.insert(rest.end(), parts[g].begin(), parts[g].end());
      }
      const auto n_val = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(rest.size())));
      fold.train.insert(fold.train.end(), rest.begin(), rest.end() - static_cast<long>(n_val));
      fold.val.insert(fold.val.end(), rest.end() - static_cast<long>(n_val), rest.end());
    }
    fold.train.insert(fold.train.end(), plan.train_only.begin(), plan.train_only.end());
    std::sort(fold.train.begin(), fold.train.end());
    std::sort(fold.val.begin(), fold.val.end());
    std::sort(fold.test.begin(), fold.test.end());
  }
  std::sort(plan.train_only.begin(), plan.train_only.end());
  return plan;
}

std::vector<std::size_t> stratified_subsample(const std::vector<std::string>& labels,
                                              const std::vector<std::size_t>& indices,
                                              double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw HarError("real-data fraction must lie in (0, 1]");
  }
  std::uint64_t rng = seed;
  std::vector<std::size_t> out;
  auto sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  for (auto& [label, members] : group_by_label(labels, sorted)) {
    shuffle_in_place(members, rng);
    const auto want = std::llround(fraction * static_cast<double>(members.size()));
    const auto keep = std::min<std::size_t>(members.size(), std::max<long long>(1, want));
    out.insert(out.end(), members.begin(), members.begin() + static_cast<long>(keep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

json EvalMetrics::to_json() const {
  json classes = json::object();
  for (const auto& [label, s] : per_class) {
    classes[label] = {{"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1},
                      {"support", s.support}};
  }
  return {{"accuracy", accuracy},
          {"macro_f1", macro_f1},
          {"weighted_f1", weighted_f1},
          {"per_class", classes}};
}

EvalMetrics evaluate_predictions(const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predicted) {
  if (truth.empty()) throw HarError("evaluation needs a non-empty test set");
  if (truth.size() != predicted.size()) throw HarError("prediction count does not match test set");
  EvalMetrics m;
  std::map<std::string, std::size_t> predicted_count;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.per_class[truth[i]].support;
    ++predicted_count[predicted[i]];
    if (truth[i] == predicted[i]) ++correct;
  }
  std::map<std::string, std::size_t> tp;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == predicted[i]) ++tp[truth[i]];
  }
  const double total = static_cast<double>(truth.size());
  m.accuracy = static_cast<double>(correct) / total;
  for (auto& [label, s] : m.per_class) {
    const double hits = static_cast<double>(tp[label]);
    const auto pc = predicted_count.find(label);
    s.precision = pc == predicted_count.end() ? 0.0 : hits / static_cast<double>(pc->second);
    s.recall = hits / static_cast<double>(s.support);
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                        : 0.0;
    m.macro_f1 += s.f1;
    m.weighted_f1 += s.f1 * static_cast<double>(s.support);
  }
  m.macro_f1 /= static_cast<double>(m.per_class.size());
  m.weighted_f1 /= total;
  return m;
}

EvalMetrics evaluate(const LinearModel& model, const Dataset& test) {
  std::vector<std::string> truth, predicted;
  truth.reserve(test.size());
  predicted.reserve(test.size());
  for (const auto& e : test) {
    truth.push_back(e.label);
    predicted.push_back(model.predict(e.features));
  }
  return evaluate_predictions(truth, predicted);
}

json MetricSummary::to_json() const {
  auto ms = [](const MeanStd& v) { return json{{"mean", v.mean}, {"std", v.stddev}}; };
  return {{"accuracy", ms(accuracy)},
          {"macro_f1", ms(macro_f1)},
          {"weighted_f1", ms(weighted_f1)},
          {"runs", runs}};
}

MetricSummary summarize(const std::vector<EvalMetrics>& runs) {
  MetricSummary s;
  s.runs = runs.size();
  if (runs.empty()) return s;
  auto stat = [&](double EvalMetrics::*field) {
    MeanStd r;
    for (const auto& m : runs) r.mean += m.*field;
    r.mean /= static_cast<double>(runs.size());
    for (const auto& m : runs) r.stddev += (m.*field - r.mean) * (m.*field - r.mean);
    r.stddev = std::sqrt(r.stddev / static_cast<double>(runs.size()));
    return r;
  };
  s.accuracy = stat(&EvalMetrics::accuracy);
  s.macro_f1 = stat(&EvalMetrics::macro_f1);
  s.weighted_f1 = stat(&EvalMetrics::weighted_f1);
  return s;
}

MetricSummary ProtocolResult::summary(std::string_view arm, double fraction) const {
  std::vector<EvalMetrics> selected;
  for (const auto& r : runs) {
    if (r.arm == arm && r.fraction == fraction) selected.push_back(r.metrics);
  }
  return summarize(selected);
}

json ProtocolResult::to_json(const ProtocolConfig& config) const {
  json j_runs = json::array();
  for (const auto& r : runs) {
    j_runs.push_back({{"arm", r.arm},
                      {"fraction", r.fraction},
                      {"seed", r.seed},
                      {"fold", r.fold},
                      {"metrics", r.metrics.to_json()}});
  }
  json j_summary = json::array();
  for (double f : config.fractions) {
    for (const char* arm : {"real_only", "pretrain"}) {
      j_summary.push_back({{"arm", arm}, {"fraction", f}, {"metrics", summary(arm, f).to_json()}});
    }
  }
  return {{"config",
           {{"fractions", config.fractions},
            {"seeds", config.seeds},
            {"folds", config.folds},
            {"mix", config.mix},
            {"train", config.train.to_json()}}},
          {"runs", j_runs},
          {"summary", j_summary},
          {"warnings", warnings}};
}

std::string ProtocolResult::table(const ProtocolConfig& config) const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-9s %-10s %-17s %-17s %-17s\n", "fraction", "arm",
                "accuracy", "macro_f1", "weighted_f1");
  out << line;
  for (double f : config.fractions) {
    for (const char* arm : {"real_only", "pretrain"}) {
      const auto s = summary(arm, f);
      std::snprintf(line, sizeof line, "%-9.3f %-10s %-17s %-17s %-17s\n", f, arm,
                    fmt("%.4f +/- %.4f", s.accuracy.mean, s.accuracy.stddev).c_str(),
                    fmt("%.4f +/- %.4f", s.macro_f1.mean, s.macro_f1.stddev).c_str(),
                    fmt("%.4f +/- %.4f", s.weighted_f1.mean, s.weighted_f1.stddev).c_str());
      out << line;
    }
  }
  return out.str();
}

ProtocolResult run_protocol(const Dataset& virtual_data, const Dataset& real_data,
                            const ProtocolConfig& config, std::size_t jobs) {
  if (real_data.empty()) throw HarError("real corpus is empty");
  if (config.fractions.empty() || config.seeds.empty()) {
    throw HarError("protocol needs at least one fraction and one seed");
  }
  config.train.validate();
  std::vector<std::string> labels;
  labels.reserve(real_data.size());
  for (const auto& e : real_data) labels.push_back(e.label);
  const auto real_vocab = label_vocabulary(real_data);

  ProtocolResult result;
  std::set<std::string> warnings;
  std::map<std::uint64_t, FoldPlan> plans;
  for (auto seed : config.seeds) {
    auto plan = stratified_folds(labels, config.folds, seed);
    warnings.insert(plan.warnings.begin(), plan.warnings.end());
    plans.emplace(seed, std::move(plan));
  }
  result.warnings.assign(warnings.begin(), warnings.end());

  struct Task {
    double fraction;
    std::uint64_t seed;
    std::size_t fold;
  };
  std::vector<Task> tasks;
  for (double f : config.fractions) {
    for (auto seed : config.seeds) {
      for (std::size_t k = 0; k < config.folds; ++k) tasks.push_back({f, seed, k});
    }
  }
  result.runs.resize(tasks.size() * 2);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      try {
        const Fold& fold = plans.at(task.seed).folds[task.fold];
        const auto picked = stratified_subsample(labels, fold.train, task.fraction,
                                                 task.seed * 7919 + task.fold);
        const Dataset train_set = select(real_data, picked);
        const Dataset val_set = select(real_data, fold.val);
        const Dataset test_set = select(real_data, fold.test);
        TrainConfig tc = config.train;
        tc.seed = task.seed;
        const auto real_only = train(train_set, tc, &val_set, real_vocab);
        const auto pretrained = pretrain_finetune(virtual_data, train_set, tc, config.mix, &val_set);
        result.runs[2 * t] = {"real_only", task.fraction, task.seed, task.fold,
                              evaluate(real_only, test_set)};
        result.runs[2 * t + 1] = {"pretrain", task.fraction, task.seed, task.fold,
                                  evaluate(pretrained, test_set)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

}  // namespace ambisim::har
