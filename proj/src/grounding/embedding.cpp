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
#include <numbers>

#include "ambisim/common.hpp"
#include "ambisim/grounding.hpp"

namespace ambisim::grounding {

namespace {

// Uniform in (0, 1].
double unit_open(std::uint64_t& state) {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

void normalize(Embedding& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw GroundingError("cosine: dimension mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw GroundingError("cosine: zero-norm vector");
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension) : dimension_(dimension) {
  if (dimension < 2) throw GroundingError("embedding dimension must be >= 2");
}

void HashEmbeddingProvider::add_synonym(std::string alias, std::string target, double similarity) {
  if (!(similarity > -1.0 && similarity <= 1.0)) {
    throw GroundingError("synonym similarity must lie in (-1, 1]");
  }
  synonyms_[to_lower(alias)] = Synonym{to_lower(target), similarity};
}

Embedding HashEmbeddingProvider::base_vector(std::string_view token) const {
  std::uint64_t state = fnv1a64(token);
  Embedding v(dimension_);
  // Box-Muller pairs; spelled out so the stream is identical on every platform.
  for (std::size_t i = 0; i < dimension_; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(state)));
    const double theta = 2.0 * std::numbers::pi * unit_open(state);
    v[i] = r * std::cos(theta);
    if (i + 1 < dimension_) v[i + 1] = r * std::sin(theta);
  }
  normalize(v);
  return v;
}

Embedding HashEmbeddingProvider::embed(std::string_view text) {
  const auto token = to_lower(text);
  auto it = synonyms_.find(token);
  if (it == synonyms_.end()) return base_vector(token);

  const Embedding target = base_vector(it->second.target);
  Embedding perp = base_vector(token);
  double proj = 0.0;
  for (std::size_t i = 0; i < dimension_; ++i) proj += perp[i] * target[i];
  for (std::size_t i = 0; i < dimension_; ++i) perp[i] -= proj * target[i];
  normalize(perp);

  const double s = it->second.similarity;
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  Embedding out(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) out[i] = s * target[i] + c * perp[i];
  return out;
}

}  // namespace ambisim::grounding
