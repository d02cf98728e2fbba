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
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ambisim/common.hpp"
#include "ambisim/har.hpp"

namespace ambisim::har {

using nlohmann::json;

std::string_view to_string(Optimizer optimizer) {
  return optimizer == Optimizer::Adam ? "adam" : "sgd";
}

std::optional<Optimizer> optimizer_from_string(std::string_view s) {
  const auto lower = to_lower(s);
  if (lower == "sgd") return Optimizer::Sgd;
  if (lower == "adam") return Optimizer::Adam;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (epochs <= 0) throw HarError("epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw HarError("learning rate must be positive");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw HarError("weight decay must be non-negative");
  }
  if (batch_size == 0) throw HarError("batch size must be positive");
  if (patience < 0) throw HarError("patience must be non-negative");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw HarError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw HarError("Adam epsilon must be positive");
}

json TrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"weight_decay", weight_decay},
          {"batch_size", batch_size},
          {"seed", seed},
          {"patience", patience},
          {"optimizer", std::string(to_string(optimizer))},
          {"adam_beta1", adam_beta1},
          {"adam_beta2", adam_beta2},
          {"adam_epsilon", adam_epsilon}};
}

TrainConfig TrainConfig::from_json(const json& d) {
  TrainConfig c;
  try {
    c.epochs = d.value("epochs", c.epochs);
    c.learning_rate = d.value("learning_rate", c.learning_rate);
    c.weight_decay = d.value("weight_decay", c.weight_decay);
    c.batch_size = d.value("batch_size", c.batch_size);
    c.seed = d.value("seed", c.seed);
    c.patience = d.value("patience", c.patience);
    if (d.contains("optimizer")) {
      const auto o = optimizer_from_string(d["optimizer"].get<std::string>());
      if (!o) throw HarError("unknown optimizer '" + d["optimizer"].get<std::string>() + "'");
      c.optimizer = *o;
    }
    c.adam_beta1 = d.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = d.value("adam_beta2", c.adam_beta2);
    c.adam_epsilon = d.value("adam_epsilon", c.adam_epsilon);
  } catch (const json::exception& e) {
    throw HarError(std::string("malformed training config: ") + e.what());
  }
  c.validate();
  return c;
}

LinearModel::LinearModel(std::vector<std::string> labels, std::size_t dimension)
    : labels_(std::move(labels)),
      dimension_(dimension),
      weights_(labels_.size() * dimension, 0.0),
      bias_(labels_.size(), 0.0) {
  if (dimension_ == 0) throw HarError("model dimension must be positive");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw HarError("model labels must be distinct");
  }
}

std::optional<std::size_t> LinearModel::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::vector<double> LinearModel::logits(const FeatureVector& x) const {
  if (x.dimension != dimension_) throw HarError("feature dimension does not match the model");
  std::vector<double> z = bias_;
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    const double* row = weights_.data() + c * dimension_;
    for (std::size_t k = 0; k < x.index.size(); ++k) z[c] += row[x.index[k]] * x.value[k];
  }
  return z;
}

std::vector<double> LinearModel::probabilities(const FeatureVector& x) const {
  return softmax(logits(x));
}

std::size_t LinearModel::predict_index(const FeatureVector& x) const {
  const auto z = logits(x);
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

const std::string& LinearModel::predict(const FeatureVector& x) const {
  return labels_.at(predict_index(x));
}

double LinearModel::weight_norm_squared() const {
  return std::inner_product(weights_.begin(), weights_.end(), weights_.begin(), 0.0);
}

json LinearModel::to_json() const {
  json rows = json::array();
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    rows.push_back(std::vector<double>(weights_.begin() + c * dimension_,
                                       weights_.begin() + (c + 1) * dimension_));
  }
  return {{"labels", labels_}, {"dimension", dimension_}, {"weights", rows}, {"bias", bias_}};
}

LinearModel LinearModel::from_json(const json& d) {
  try {
    LinearModel m(d.at("labels").get<std::vector<std::string>>(),
                  d.at("dimension").get<std::size_t>());
    const auto& rows = d.at("weights");
    if (rows.size() != m.num_labels()) throw HarError("weight rows do not match labels");
    for (std::size_t c = 0; c < rows.size(); ++c) {
      const auto row = rows[c].get<std::vector<double>>();
      if (row.size() != m.dimension_) throw HarError("weight row has the wrong dimension");
      std::copy(row.begin(), row.end(), m.weights_.begin() + c * m.dimension_);
    }
    m.bias_ = d.at("bias").get<std::vector<double>>();
    if (m.bias_.size() != m.num_labels()) throw HarError("bias does not match labels");
    return m;
  } catch (const json::exception& e) {
    throw HarError(std::string("malformed model: ") + e.what());
  }
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> p(z.begin(), z.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double s = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    s += v;
  }
  for (double& v : p) v /= s;
  return p;
}

double loss_and_gradient(const LinearModel& model, std::span<const Example* const> batch,
                         double weight_decay, std::vector<double>* grad_w,
                         std::vector<double>* grad_b) {
  const std::size_t labels = model.num_labels();
  const std::size_t dim = model.dimension();
  if (grad_w) grad_w->assign(labels * dim, 0.0);
  if (grad_b) grad_b->assign(labels, 0.0);
  double loss = 0.0;
  const double scale = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  for (const Example* ex : batch) {
    const auto y = model.label_index(ex->label);
    if (!y) throw HarError("label '" + ex->label + "' is not in the model vocabulary");
    const auto z = model.logits(ex->features);
    const double m = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - m);
    const double log_sum = m + std::log(s);
    loss += (log_sum - z[*y]) * scale;
    if (!grad_w && !grad_b) continue;
    for (std::size_t c = 0; c < labels; ++c) {
      const double delta = (std::exp(z[c] - log_sum) - (c == *y ? 1.0 : 0.0)) * scale;
      if (grad_b) (*grad_b)[c] += delta;
      if (grad_w) {
        double* row = grad_w->data() + c * dim;
        const auto& f = ex->features;
        for (std::size_t k = 0; k < f.index.size(); ++k) row[f.index[k]] += delta * f.value[k];
      }
    }
  }
  if (weight_decay != 0.0) {
    loss += weight_decay * model.weight_norm_squared();
    if (grad_w) {
      const auto& w = model.weights();
      for (std::size_t i = 0; i < w.size(); ++i) (*grad_w)[i] += 2.0 * weight_decay * w[i];
    }
  }
  return loss;
}

double dataset_loss(const LinearModel& model, const Dataset& data, double weight_decay) {
  std::vector<const Example*> all;
  all.reserve(data.size());
  for (const auto& e : data) all.push_back(&e);
  return loss_and_gradient(model, all, weight_decay);
}

Trainer::Trainer(std::vector<std::string> labels, std::size_t dimension, TrainConfig config)
    : model_(std::move(labels), dimension), config_(config), rng_state_(config.seed) {
  config_.validate();
  if (model_.num_labels() < 2) throw HarError("training needs at least two distinct labels");
  if (config_.optimizer == Optimizer::Adam) {
    m_w_.assign(model_.weights().size(), 0.0);
    v_w_.assign(model_.weights().size(), 0.0);
    m_b_.assign(model_.num_labels(), 0.0);
    v_b_.assign(model_.num_labels(), 0.0);
  }
}

void Trainer::step(std::span<const Example* const> batch) {
  loss_and_gradient(model_, batch, config_.weight_decay, &grad_w_, &grad_b_);
  auto& w = model_.weights();
  auto& b = model_.bias();
  const double lr = config_.learning_rate;
  if (config_.optimizer == Optimizer::Sgd) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * grad_w_[i];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * grad_b_[i];
    return;
  }
  ++adam_t_;
  const double b1 = config_.adam_beta1, b2 = config_.adam_beta2, eps = config_.adam_epsilon;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam_t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam_t_));
  auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                    std::vector<double>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  };
  update(w, grad_w_, m_w_, v_w_);
  update(b, grad_b_, m_b_, v_b_);
}

void Trainer::fit(const Dataset& data, const Dataset* validation) {
  if (data.empty()) throw HarError("training data is empty");
  for (const auto& e : data) {
    if (!model_.label_index(e.label)) {
      throw HarError("label '" + e.label + "' is not in the model vocabulary");
    }
    if (e.features.dimension != model_.dimension()) {
      throw HarError("feature dimension does not match the model");
    }
  }
  const bool early_stop = validation && !validation->empty() && config_.patience > 0;
  double best_val = std::numeric_limits<double>::infinity();
  LinearModel best = model_;
  int since_best = 0;

  // Each epoch shuffles the data order afresh, so the batch sequence depends
  // only on the RNG state and consecutive fit() calls compose exactly.
  std::vector<const Example*> order(data.size());
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    for (std::size_t i = 0; i < data.size(); ++i) order[i] = &data[i];
    shuffle_in_place(order, rng_state_);
    for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
      const std::size_t n = std::min(config_.batch_size, order.size() - start);
      step(std::span<const Example* const>(order.data() + start, n));
      if (!std::isfinite(model_.bias()[0])) {
        throw HarError("training diverged (non-finite parameters) at epoch " +
                       std::to_string(epoch + 1) + ", batch starting at " +
                       std::to_string(start));
      }
    }
    const double loss = dataset_loss(model_, data, config_.weight_decay);
    if (!std::isfinite(loss)) {
      throw HarError("training diverged (non-finite loss) at epoch " + std::to_string(epoch + 1));
    }
    epoch_losses_.push_back(loss);
    if (early_stop) {
      const double val = dataset_loss(model_, *validation, config_.weight_decay);
      if (val < best_val) {
        best_val = val;
        best = model_;
        since_best = 0;
      } else if (++since_best >= config_.patience) {
        model_ = best;
        break;
      }
    }
  }
}

std::vector<std::string> label_vocabulary(const Dataset& data) {
  std::set<std::string> s;
  for (const auto& e : data) s.insert(e.label);
  return {s.begin(), s.end()};
}

LinearModel train(const Dataset& data, const TrainConfig& config, const Dataset* validation,
                  std::optional<std::vector<std::string>> labels) {
  if (data.empty()) throw HarError("training data is empty");
  auto vocab = labels ? std::move(*labels) : label_vocabulary(data);
  if (vocab.size() < 2) throw HarError("training needs at least two distinct labels");
  Trainer trainer(std::move(vocab), data.front().features.dimension, config);
  trainer.fit(data, validation);
  return trainer.model();
}

LinearModel pretrain_finetune(const Dataset& virtual_data, const Dataset& real_data,
                              const TrainConfig& config, bool mix, const Dataset* validation) {
  if (real_data.empty()) throw HarError("fine-tuning data (real) is empty");
  std::set<std::string> labels;
  for (const auto& e : virtual_data) labels.insert(e.label);
  for (const auto& e : real_data) labels.insert(e.label);
  Trainer trainer({labels.begin(), labels.end()}, real_data.front().features.dimension, config);
  if (!virtual_data.empty()) trainer.fit(virtual_data);
  if (mix && !virtual_data.empty()) {
    Dataset combined = virtual_data;
    combined.insert(combined.end(), real_data.begin(), real_data.end());
    trainer.fit(combined, validation);
  } else {
    trainer.fit(real_data, validation);
  }
  return trainer.model();
}

}  // namespace ambisim::har
