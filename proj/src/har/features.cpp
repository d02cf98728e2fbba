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

#include <cctype>
#include <cmath>
#include <map>

#include "ambisim/common.hpp"
#include "ambisim/har.hpp"

namespace ambisim::har {

std::vector<double> FeatureVector::dense() const {
  std::vector<double> out(dimension, 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = value[i];
  return out;
}

double FeatureVector::norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return std::sqrt(s);
}

std::vector<std::string> word_grams(std::string_view sentence) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
    if (j > i) words.emplace_back(sentence.substr(i, j - i));
    i = j;
  }
  std::vector<std::string> grams = words;
  for (std::size_t w = 0; w + 1 < words.size(); ++w) grams.push_back(words[w] + ' ' + words[w + 1]);
  return grams;
}

std::uint32_t gram_bucket(std::string_view gram, std::size_t dimension) {
  return static_cast<std::uint32_t>(fnv1a64(gram) % dimension);
}

FeatureVector featurize_sentences(const std::vector<std::string>& sentences,
                                  std::size_t dimension) {
  if (dimension == 0) throw HarError("feature dimension must be positive");
  std::map<std::uint32_t, double> counts;
  for (const auto& s : sentences) {
    for (const auto& g : word_grams(s)) counts[gram_bucket(g, dimension)] += 1.0;
  }
  FeatureVector v;
  v.dimension = dimension;
  double sq = 0.0;
  for (const auto& [_, c] : counts) sq += c * c;
  const double n = std::sqrt(sq);
  for (const auto& [i, c] : counts) {
    v.index.push_back(i);
    v.value.push_back(c / n);
  }
  return v;
}

FeatureVector featurize(const dataset::ActivityWindow& window, dataset::TdostVariant variant,
                        std::size_t dimension) {
  std::vector<std::string> sentences;
  sentences.reserve(window.events.size());
  for (const auto& e : window.events) sentences.push_back(dataset::tdost(e, variant));
  return featurize_sentences(sentences, dimension);
}

Dataset featurize_windows(const std::vector<dataset::ActivityWindow>& windows,
                          dataset::TdostVariant variant, std::size_t dimension) {
  Dataset out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back({featurize(w, variant, dimension), w.label});
  return out;
}

}  // namespace ambisim::har
