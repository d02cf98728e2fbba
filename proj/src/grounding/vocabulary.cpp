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
#include <fstream>
#include <set>

#include "ambisim/common.hpp"
#include "ambisim/grounding.hpp"

namespace ambisim::grounding {

using nlohmann::json;

std::string normalize_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == ' ' || c == '\t' || c == '_' || c == '-') continue;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

VocabularyIndex VocabularyIndex::build(
    const std::vector<std::string>& tokens, VocabularyKind kind,
    const std::map<std::string, std::vector<std::string>>& room_partition,
    EmbeddingProvider& provider) {
  if (tokens.empty()) throw GroundingError("vocabulary index needs at least one token");
  VocabularyIndex index;
  index.kind_ = kind;
  std::map<std::string, std::size_t, std::less<>> position;
  for (const auto& token : tokens) {
    if (!position.emplace(token, index.tokens_.size()).second) {
      throw GroundingError("duplicate vocabulary token '" + token + "'");
    }
    Embedding v;
    try {
      v = provider.embed(normalize_token(token));
    } catch (const std::exception& e) {
      throw GroundingError("embedding token '" + token + "' failed: " + e.what());
    }
    if (index.dimension_ == 0) index.dimension_ = v.size();
    if (v.size() != index.dimension_ || v.empty()) {
      throw GroundingError("token '" + token + "' embedded with inconsistent dimension");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw GroundingError("token '" + token + "' embedded non-finite");
    }
    index.tokens_.push_back(token);
    index.vectors_.push_back(std::move(v));
  }
  if (kind == VocabularyKind::Object) {
    for (const auto& [room, members] : room_partition) {
      std::vector<std::size_t> subset;
      for (const auto& m : members) {
        auto it = position.find(m);
        if (it == position.end()) {
          throw GroundingError("room '" + room + "' lists token '" + m + "' not in the index");
        }
        subset.push_back(it->second);
      }
      std::sort(subset.begin(), subset.end());
      subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
      index.partition_.emplace(room, std::move(subset));
    }
  }
  return index;
}

bool VocabularyIndex::contains(std::string_view token) const {
  return std::find(tokens_.begin(), tokens_.end(), token) != tokens_.end();
}

const std::vector<std::size_t>* VocabularyIndex::room_subset(std::string_view room) const {
  auto it = partition_.find(room);
  return it == partition_.end() ? nullptr : &it->second;
}

std::vector<std::string> VocabularyIndex::rooms() const {
  std::vector<std::string> out;
  for (const auto& [room, _] : partition_) out.push_back(room);
  return out;
}

Match VocabularyIndex::nearest(std::span<const double> query,
                               std::optional<std::string_view> room) const {
  const std::vector<std::size_t>* subset = nullptr;
  if (room && kind_ == VocabularyKind::Object) {
    subset = room_subset(*room);
    if (!subset || subset->empty()) {
      throw GroundingError("no candidate objects for room '" + std::string(*room) + "'");
    }
  }
  const std::size_t n = subset ? subset->size() : tokens_.size();
  if (n == 0) throw GroundingError("empty vocabulary");

  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = subset ? (*subset)[k] : k;
    const double s = cosine(query, vectors_[i]);
    if (!best || s > best_score || (s == best_score && tokens_[i] < tokens_[*best])) {
      best = i;
      best_score = s;
    }
  }
  return Match{tokens_[*best], best_score};
}

Match nearest(const VocabularyIndex& index, EmbeddingProvider& provider,
              std::string_view query_token, std::optional<std::string_view> room) {
  const auto q = provider.embed(normalize_token(query_token));
  return index.nearest(q, room);
}

Vocabulary load_vocabulary(const json& doc) {
  if (!doc.is_object()) throw GroundingError("vocabulary: expected a JSON object");
  Vocabulary vocab;
  if (auto it = doc.find("actions"); it != doc.end()) {
    if (!it->is_array()) throw GroundingError("vocabulary.actions: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& a = (*it)[i];
      if (!a.is_string()) {
        throw GroundingError("vocabulary.actions[" + std::to_string(i) + "]: expected a string");
      }
      const auto name = to_lower(a.get<std::string>());
      if (!script::verb_from_name(name)) {
        throw GroundingError("vocabulary.actions[" + std::to_string(i) + "]: '" + name +
                             "' is not a simulator verb");
      }
      vocab.actions.push_back(name);
    }
  } else {
    for (auto v : script::kAllVerbs) vocab.actions.emplace_back(script::verb_name(v));
  }
  if (auto it = doc.find("objects"); it != doc.end()) {
    if (!it->is_array()) throw GroundingError("vocabulary.objects: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& o = (*it)[i];
      const std::string path = "vocabulary.objects[" + std::to_string(i) + "]";
      if (!o.is_object() || !o.contains("class") || !o["class"].is_string()) {
        throw GroundingError(path + ": expected {class, rooms}");
      }
      std::vector<std::string> rooms;
      if (o.contains("rooms")) {
        if (!o["rooms"].is_array()) throw GroundingError(path + ".rooms: expected an array");
        for (const auto& r : o["rooms"]) {
          if (!r.is_string()) throw GroundingError(path + ".rooms: expected strings");
          rooms.push_back(r.get<std::string>());
        }
      }
      vocab.objects.emplace_back(o["class"].get<std::string>(), std::move(rooms));
    }
  }
  return vocab;
}

Vocabulary load_vocabulary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GroundingError(path + ": cannot open vocabulary file");
  try {
    return load_vocabulary(json::parse(in));
  } catch (const json::parse_error& e) {
    throw GroundingError(path + ": " + e.what());
  } catch (const GroundingError& e) {
    throw GroundingError(path + ": " + e.what());
  }
}

VocabularyIndex build_action_index(const Vocabulary& vocabulary, EmbeddingProvider& provider) {
  return VocabularyIndex::build(vocabulary.actions, VocabularyKind::Action, {}, provider);
}

VocabularyIndex build_object_index(const env::HomeLayout& layout, const Vocabulary& vocabulary,
                                   EmbeddingProvider& provider) {
  std::vector<std::string> tokens;
  std::set<std::string> seen;
  auto add_token = [&](const std::string& t) {
    if (seen.insert(t).second) tokens.push_back(t);
  };
  std::map<std::string, std::vector<std::string>> partition;
  for (const auto& room : layout.rooms) partition[room.name];

  for (const auto& obj : layout.graph.nodes()) {
    add_token(obj.class_name);
    partition[obj.room].push_back(obj.class_name);
  }
  for (const auto& room : layout.rooms) {
    add_token(room.name);
    for (const auto& other : layout.rooms) partition[other.name].push_back(room.name);
  }
  for (const auto& [cls, rooms] : vocabulary.objects) {
    for (const auto& r : rooms) {
      if (!partition.count(r)) continue;
      add_token(cls);
      partition[r].push_back(cls);
    }
  }
  return VocabularyIndex::build(tokens, VocabularyKind::Object, partition, provider);
}

void GroundingThresholds::validate() const {
  if (!(tau_act >= -1.0 && tau_act <= 1.0)) throw GroundingError("tau_act must lie in [-1, 1]");
  if (!(tau_obj >= -1.0 && tau_obj <= 1.0)) throw GroundingError("tau_obj must lie in [-1, 1]");
  if (max_retries < 0) throw GroundingError("max_retries must be >= 0");
}

}  // namespace ambisim::grounding
