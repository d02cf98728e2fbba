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

// Converts free-form routine text into grammar-valid commands: clean the raw
// text, embed verb/object tokens, retrieve the nearest valid vocabulary token
// by cosine similarity, and accept it only above a per-kind threshold.
// Lines that fail are offered to a RepairProvider and re-grounded.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ambisim/action_script.hpp"
#include "ambisim/env.hpp"

namespace ambisim::grounding {

using Embedding = std::vector<double>;

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u.v / (|u| |v|). Throws GroundingError on zero norm or dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Embedding embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
};

/// Hermetic provider: each lowercase token maps to a pseudorandom unit vector
/// seeded by its FNV-1a hash. Synonyms map an alias to a vector at a chosen
/// cosine from its target's vector.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dimension = 128);

  /// `similarity` must lie in (-1, 1].
  void add_synonym(std::string alias, std::string target, double similarity);

  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  Embedding base_vector(std::string_view token) const;

  struct Synonym {
    std::string target;
    double similarity;
  };
  std::size_t dimension_;
  std::unordered_map<std::string, Synonym> synonyms_;
};

/// JSON-over-HTTP client: POST {"input": [texts]} -> {"embeddings": [[...]]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  /// `url` is `http://host[:port]/path`.
  HttpEmbeddingProvider(std::string url, std::string api_key = {});

  /// Reads AMBISIM_EMBEDDING_URL and AMBISIM_EMBEDDING_KEY; nullptr when unset.
  static std::unique_ptr<HttpEmbeddingProvider> from_environment();

  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts);
  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override;

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::string api_key_;
  mutable std::size_t dimension_ = 0;
  std::unordered_map<std::string, Embedding> cache_;
};

enum class VocabularyKind { Action, Object };

struct Match {
  std::string token;
  double score = 0.0;
};

/// Immutable token/vector table with an optional room partition (objects).
class VocabularyIndex {
 public:
  static VocabularyIndex build(const std::vector<std::string>& tokens, VocabularyKind kind,
                               const std::map<std::string, std::vector<std::string>>& room_partition,
                               EmbeddingProvider& provider);

  VocabularyKind kind() const { return kind_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const Embedding& vector(std::size_t i) const { return vectors_.at(i); }
  bool contains(std::string_view token) const;
  /// Indices of the room subset; nullptr when the room is not partitioned.
  const std::vector<std::size_t>* room_subset(std::string_view room) const;
  std::vector<std::string> rooms() const;

  /// Exhaustive cosine argmax over the full set, or over the room subset for
  /// Object indexes when `room` is given. Ties go to the lexicographically
  /// smaller token. Throws GroundingError on an empty candidate set.
  Match nearest(std::span<const double> query, std::optional<std::string_view> room = {}) const;

 private:
  VocabularyKind kind_ = VocabularyKind::Action;
  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<Embedding> vectors_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> partition_;
};

Match nearest(const VocabularyIndex& index, EmbeddingProvider& provider,
              std::string_view query_token, std::optional<std::string_view> room = {});

/// Lowercases and drops whitespace, '_' and '-' so "Kitchen Counter" and
/// "kitchencounter" embed identically.
std::string normalize_token(std::string_view token);

struct Vocabulary {
  std::vector<std::string> actions;
  /// class -> rooms it may appear in
  std::vector<std::pair<std::string, std::vector<std::string>>> objects;
};

/// {actions:[...], objects:[{class, rooms:[...]}]}; actions default to the
/// sixteen simulator verbs.
Vocabulary load_vocabulary(const nlohmann::json& document);
Vocabulary load_vocabulary_file(const std::string& path);

VocabularyIndex build_action_index(const Vocabulary& vocabulary, EmbeddingProvider& provider);
/// Room partition over the layout rooms: each room's object classes, every
/// room name (walk targets), and vocabulary classes listed for that room.
VocabularyIndex build_object_index(const env::HomeLayout& layout, const Vocabulary& vocabulary,
                                   EmbeddingProvider& provider);

struct GroundingThresholds {
  double tau_act = 0.8;
  double tau_obj = 0.6;
  int max_retries = 3;

  void validate() const;
};

// --- cleaning -------------------------------------------------------------

struct CandidateLine {
  std::string text;
  std::string activity;
  std::size_t source_line = 0;  // 1-based line in the raw text
};

struct CleanedOutput {
  std::vector<CandidateLine> lines;
  std::size_t dropped_unrecognized = 0;
};

/// Keeps command lines, strips headers/numbering/day labels, and attaches the
/// room of the most recent interval header to commands that lack one.
CleanedOutput clean_output(std::string_view raw_text);

/// Lenient command shape: arbitrary bracketed tokens, strict times.
struct RawCommand {
  std::string verb;
  std::vector<std::string> objects;
  script::TimeOfDay start;
  script::TimeOfDay end;
  std::optional<std::string> room;
};

/// Returns the parsed command or a reason string.
std::variant<RawCommand, std::string> parse_raw_command(std::string_view text);
std::string render_raw_command(const RawCommand& command);

// --- grounding ------------------------------------------------------------

struct Substitution {
  std::string raw;
  std::string grounded;
  double score = 0.0;
};

struct GroundedStep {
  script::ActionStep step;
  std::vector<Substitution> substitutions;
};

struct Flagged {
  std::string token;  // empty when the line failed before retrieval
  double best_score = 0.0;
  std::string reason;
};

using StepResult = std::variant<GroundedStep, Flagged>;

class RepairProvider {
 public:
  virtual ~RepairProvider() = default;
  /// A replacement line, or nullopt when no repair is offered.
  virtual std::optional<std::string> repair(const std::string& flagged_line,
                                            const std::vector<std::string>& context) = 0;
};

class NullRepairProvider : public RepairProvider {
 public:
  std::optional<std::string> repair(const std::string&, const std::vector<std::string>&) override {
    return std::nullopt;
  }
};

struct Accepted {
  std::vector<Substitution> substitutions;
};
struct Repaired {
  int attempts = 0;
  std::vector<Substitution> substitutions;
};
struct Discarded {
  std::string reason;
  int attempts = 0;
};

struct LineOutcome {
  std::size_t source_line = 0;
  std::string text;
  std::variant<Accepted, Repaired, Discarded> outcome;
};

struct GroundingReport {
  std::vector<LineOutcome> lines;
  std::size_t dropped_unrecognized = 0;

  std::size_t accepted() const;
  std::size_t repaired() const;
  std::size_t discarded() const;
  nlohmann::json to_json() const;
};

struct GroundingResult {
  script::Script script;
  GroundingReport report;
};

/// Holds one layout's indexes and a provider; reusable across scripts of that
/// layout. Not thread-safe when the provider is not.
class Grounder {
 public:
  Grounder(EmbeddingProvider& provider, VocabularyIndex actions, VocabularyIndex objects,
           GroundingThresholds thresholds = {});

  /// `room` overrides the line's own room annotation when given.
  StepResult ground_step(std::string_view line, std::optional<std::string_view> room = {});
  GroundingResult ground_script(std::string_view raw_text, RepairProvider& repair);

  const GroundingThresholds& thresholds() const { return thresholds_; }
  const VocabularyIndex& actions() const { return actions_; }
  const VocabularyIndex& objects() const { return objects_; }

 private:
  EmbeddingProvider& provider_;
  VocabularyIndex actions_;
  VocabularyIndex objects_;
  GroundingThresholds thresholds_;
};

}  // namespace ambisim::grounding
