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

// Desk-scale activity classifier: hashed word n-gram features over TDOST
// sentences, a multinomial linear model, and the pretrain/finetune plus
// stratified k-fold evaluation protocol.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ambisim/dataset.hpp"

namespace ambisim::har {

class HarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDimension = 4096;

/// L2-normalized term-frequency vector over D hashed buckets, stored sparsely
/// (bucket indices strictly increasing). The all-zero vector has no entries.
struct FeatureVector {
  std::size_t dimension = kDefaultDimension;
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::vector<double> dense() const;
  double norm() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Word unigrams and adjacent bigrams ("a b") of one whitespace-tokenized sentence.
std::vector<std::string> word_grams(std::string_view sentence);
std::uint32_t gram_bucket(std::string_view gram, std::size_t dimension);

FeatureVector featurize_sentences(const std::vector<std::string>& sentences,
                                  std::size_t dimension = kDefaultDimension);
FeatureVector featurize(const dataset::ActivityWindow& window, dataset::TdostVariant variant,
                        std::size_t dimension = kDefaultDimension);

struct Example {
  FeatureVector features;
  std::string label;
};
using Dataset = std::vector<Example>;

Dataset featurize_windows(const std::vector<dataset::ActivityWindow>& windows,
                          dataset::TdostVariant variant,
                          std::size_t dimension = kDefaultDimension);

enum class Optimizer { Sgd, Adam };

std::string_view to_string(Optimizer optimizer);
std::optional<Optimizer> optimizer_from_string(std::string_view s);

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1e-4;
  double weight_decay = 0.0;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  /// Epochs without validation-loss improvement before stopping; 0 disables.
  /// Only consulted when a validation set is supplied.
  int patience = 5;
  Optimizer optimizer = Optimizer::Sgd;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& document);
};

class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(std::vector<std::string> labels, std::size_t dimension);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t num_labels() const { return labels_.size(); }
  std::optional<std::size_t> label_index(std::string_view label) const;

  /// Row-major (labels x dimension).
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  std::vector<double> logits(const FeatureVector& x) const;
  std::vector<double> probabilities(const FeatureVector& x) const;
  std::size_t predict_index(const FeatureVector& x) const;
  const std::string& predict(const FeatureVector& x) const;
  double weight_norm_squared() const;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& document);

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::size_t dimension_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Mean softmax cross-entropy over `batch` plus weight_decay * ||W||^2. When
/// the gradient outputs are given they receive dLoss/dW (row-major) and dLoss/db.
double loss_and_gradient(const LinearModel& model, std::span<const Example* const> batch,
                         double weight_decay, std::vector<double>* grad_weights = nullptr,
                         std::vector<double>* grad_bias = nullptr);

double dataset_loss(const LinearModel& model, const Dataset& data, double weight_decay);

/// Mini-batch trainer. The shuffling RNG and optimizer state persist across
/// fit() calls, so fitting the same data twice equals one fit of 2x epochs.
class Trainer {
 public:
  Trainer(std::vector<std::string> labels, std::size_t dimension, TrainConfig config);

  /// Runs config.epochs epochs (fewer with early stopping on `validation`).
  void fit(const Dataset& data, const Dataset* validation = nullptr);

  const LinearModel& model() const { return model_; }
  const TrainConfig& config() const { return config_; }
  /// Full-data training loss recorded after each epoch, across all fits.
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

 private:
  void step(std::span<const Example* const> batch);

  LinearModel model_;
  TrainConfig config_;
  std::uint64_t rng_state_;
  std::vector<double> grad_w_, grad_b_;
  std::vector<double> m_w_, v_w_, m_b_, v_b_;
  std::int64_t adam_t_ = 0;
  std::vector<double> epoch_losses_;
};

/// Sorted distinct labels of `data`.
std::vector<std::string> label_vocabulary(const Dataset& data);

/// Trains on `data` with its own label vocabulary (>= 2 labels required) or
/// the given one.
LinearModel train(const Dataset& data, const TrainConfig& config,
                  const Dataset* validation = nullptr,
                  std::optional<std::vector<std::string>> labels = std::nullopt);

/// Trains on `virtual_data`, then continues on `real_data` (or on both when
/// `mix` is set) with all parameters updated. The label vocabulary is the
/// union of both corpora.
LinearModel pretrain_finetune(const Dataset& virtual_data, const Dataset& real_data,
                              const TrainConfig& config, bool mix = false,
                              const Dataset* validation = nullptr);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct FoldPlan {
  std::vector<Fold> folds;
  /// Indices of members of classes smaller than k; always in train.
  std::vector<std::size_t> train_only;
  std::vector<std::string> warnings;
};

FoldPlan stratified_folds(const std::vector<std::string>& labels, std::size_t k,
                          std::uint64_t seed);

/// Per-class stratified sample of `indices` keeping max(1, round(fraction*n))
/// members of each class; result sorted ascending.
std::vector<std::size_t> stratified_subsample(const std::vector<std::string>& labels,
                                              const std::vector<std::size_t>& indices,
                                              double fraction, std::uint64_t seed);

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::map<std::string, ClassScore> per_class;

  nlohmann::json to_json() const;
};

EvalMetrics evaluate_predictions(const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predicted);
EvalMetrics evaluate(const LinearModel& model, const Dataset& test);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

struct MetricSummary {
  MeanStd accuracy;
  MeanStd macro_f1;
  MeanStd weighted_f1;
  std::size_t runs = 0;

  nlohmann::json to_json() const;
};

MetricSummary summarize(const std::vector<EvalMetrics>& runs);

struct ProtocolConfig {
  std::vector<double> fractions{0.05, 0.1, 1.0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t folds = 3;
  bool mix = false;
  TrainConfig train;
};

struct ProtocolRun {
  std::string arm;  // "real_only" | "pretrain"
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  EvalMetrics metrics;
};

struct ProtocolResult {
  std::vector<ProtocolRun> runs;
  std::vector<std::string> warnings;

  /// Aggregate over seeds and folds for one arm and fraction.
  MetricSummary summary(std::string_view arm, double fraction) const;
  nlohmann::json to_json(const ProtocolConfig& config) const;
  std::string table(const ProtocolConfig& config) const;
};

/// Real-only versus virtual-pretrain comparison across real-data fractions,
/// seeds and stratified folds of the real corpus. Runs are independent and
/// executed on up to `jobs` threads; the result order is fixed.
ProtocolResult run_protocol(const Dataset& virtual_data, const Dataset& real_data,
                            const ProtocolConfig& config, std::size_t jobs = 1);

}  // namespace ambisim::har
