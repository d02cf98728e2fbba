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

// The constrained low-level action language:
//
//   [verb] <object> <object> (HH:MM - HH:MM) (room)
//
// Verbs are case-insensitive on input and always rendered lowercase. Times
// accept one- or two-digit hours and a hyphen or en-dash separator.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ambisim::script {

enum class ActionVerb {
  Walk,
  Run,
  WalkForward,
  TurnLeft,
  TurnRight,
  Sit,
  StandUp,
  Grab,
  Open,
  Close,
  Put,
  SwitchOn,
  SwitchOff,
  Drink,
  Touch,
  LookAt,
};

inline constexpr ActionVerb kAllVerbs[] = {
    ActionVerb::Walk,      ActionVerb::Run,      ActionVerb::WalkForward, ActionVerb::TurnLeft,
    ActionVerb::TurnRight, ActionVerb::Sit,      ActionVerb::StandUp,     ActionVerb::Grab,
    ActionVerb::Open,      ActionVerb::Close,    ActionVerb::Put,         ActionVerb::SwitchOn,
    ActionVerb::SwitchOff, ActionVerb::Drink,    ActionVerb::Touch,       ActionVerb::LookAt,
};

std::string_view verb_name(ActionVerb verb);
std::optional<ActionVerb> verb_from_name(std::string_view name);
/// Number of object slots the verb takes.
std::size_t verb_arity(ActionVerb verb);

struct TimeOfDay {
  int hour = 0;
  int minute = 0;

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;
  int minutes() const { return hour * 60 + minute; }
  bool valid() const { return hour >= 0 && hour <= 23 && minute >= 0 && minute <= 59; }
};

/// `HH:MM`, zero padded.
std::string format_time(TimeOfDay t);

struct ActionStep {
  ActionVerb verb = ActionVerb::Walk;
  std::vector<std::string> objects;
  TimeOfDay start;
  TimeOfDay end;
  std::string room;

  friend bool operator==(const ActionStep&, const ActionStep&) = default;
};

enum class ParseErrorKind {
  Bracketing,
  UnknownVerb,
  Arity,
  BadTime,
  TimeOrder,
  Ordering,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t column, const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  /// 1-based byte column where the problem was detected.
  std::size_t column() const { return column_; }

 private:
  ParseErrorKind kind_;
  std::size_t column_;
};

/// Parses one command line. Throws ParseError.
ActionStep parse_line(std::string_view text);

/// Canonical form: lowercase verb, single spaces, zero-padded times.
std::string render_step(const ActionStep& step);

struct ScriptMetadata {
  std::string persona;
  std::string day;
  std::string activity;
  std::vector<std::string> label_candidates;
  /// Per-script locomotion override (m/s); header key `walk_speed`.
  std::optional<double> walk_speed;

  friend bool operator==(const ScriptMetadata&, const ScriptMetadata&) = default;
};

/// Where a step sits in the script's timeline: its day offset (for scripts
/// that cross midnight) and the high-level activity it belongs to.
struct StepContext {
  int day = 0;
  std::string activity;

  friend bool operator==(const StepContext&, const StepContext&) = default;
};

/// Ordered steps with non-decreasing absolute start time.
class Script {
 public:
  ScriptMetadata metadata;

  /// Appends a step. A start time more than twelve hours earlier than the
  /// previous step's is read as crossing midnight; any smaller decrease
  /// violates ordering and the step is rejected (returns false).
  bool append(ActionStep step, std::string activity = {});

  const std::vector<ActionStep>& steps() const { return steps_; }
  const std::vector<StepContext>& contexts() const { return contexts_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  /// Minutes since midnight of day 0.
  int absolute_start(std::size_t i) const;
  int absolute_end(std::size_t i) const;

  friend bool operator==(const Script&, const Script&) = default;

 private:
  std::vector<ActionStep> steps_;
  std::vector<StepContext> contexts_;
};

struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::size_t column = 0;
  ParseErrorKind kind = ParseErrorKind::Bracketing;
  std::string message;
};

struct ParsedScript {
  Script script;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a script file. An optional `---` delimited header supplies
/// `persona`, `day`, `activity`, `walk_speed` and `labels` (comma separated) and overrides
/// the corresponding fields of `metadata`. Blank and `#` lines are skipped;
/// every other line is either a step or a diagnostic.
ParsedScript parse_script(std::string_view text, ScriptMetadata metadata = {});

/// Renders a script file, including a metadata header when any field is set.
std::string render_script(const Script& script);

}  // namespace ambisim::script
