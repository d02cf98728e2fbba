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

#include "ambisim/action_script.hpp"

#include <charconv>
#include <cstdio>

#include "ambisim/common.hpp"

namespace ambisim::script {

namespace {

constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr int kHalfDayMinutes = 12 * 60;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  std::size_t column() const { return pos_ + 1; }
  std::size_t pos() const { return pos_; }

  /// Reads up to (not including) `close`; fails on `forbidden` or end of text.
  std::optional<std::string_view> until(char close, std::string_view forbidden) {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != close) {
      if (forbidden.find(text_[pos_]) != std::string_view::npos) return std::nullopt;
      ++pos_;
    }
    if (pos_ >= text_.size()) return std::nullopt;
    auto out = text_.substr(start, pos_ - start);
    ++pos_;
    return out;
  }

  std::optional<TimeOfDay> time() {
    std::size_t p = pos_;
    int hour = 0;
    std::size_t digits = 0;
    while (p < text_.size() && is_digit(text_[p]) && digits < 2) {
      hour = hour * 10 + (text_[p] - '0');
      ++p;
      ++digits;
    }
    if (digits == 0 || p >= text_.size() || text_[p] != ':') return std::nullopt;
    ++p;
    if (p + 2 > text_.size() || !is_digit(text_[p]) || !is_digit(text_[p + 1])) return std::nullopt;
    const int minute = (text_[p] - '0') * 10 + (text_[p + 1] - '0');
    p += 2;
    if (p < text_.size() && is_digit(text_[p])) return std::nullopt;
    TimeOfDay t{hour, minute};
    if (!t.valid()) return std::nullopt;
    pos_ = p;
    return t;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(ParseErrorKind kind, std::size_t column, const std::string& message) {
  throw ParseError(kind, column, message);
}

}  // namespace

std::string_view verb_name(ActionVerb verb) {
  switch (verb) {
    case ActionVerb::Walk: return "walk";
    case ActionVerb::Run: return "run";
    case ActionVerb::WalkForward: return "walkforward";
    case ActionVerb::TurnLeft: return "turnleft";
    case ActionVerb::TurnRight: return "turnright";
    case ActionVerb::Sit: return "sit";
    case ActionVerb::StandUp: return "standup";
    case ActionVerb::Grab: return "grab";
    case ActionVerb::Open: return "open";
    case ActionVerb::Close: return "close";
    case ActionVerb::Put: return "put";
    case ActionVerb::SwitchOn: return "switchon";
    case ActionVerb::SwitchOff: return "switchoff";
    case ActionVerb::Drink: return "drink";
    case ActionVerb::Touch: return "touch";
    case ActionVerb::LookAt: return "lookat";
  }
  return "?";
}

std::optional<ActionVerb> verb_from_name(std::string_view name) {
  const auto lower = to_lower(name);
  for (auto v : kAllVerbs) {
    if (verb_name(v) == lower) return v;
  }
  return std::nullopt;
}

std::size_t verb_arity(ActionVerb verb) {
  switch (verb) {
    case ActionVerb::Put: return 2;
    case ActionVerb::WalkForward:
    case ActionVerb::TurnLeft:
    case ActionVerb::TurnRight:
    case ActionVerb::StandUp: return 0;
    default: return 1;
  }
}

std::string format_time(TimeOfDay t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", t.hour, t.minute);
  return buf;
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Bracketing: return "bracketing";
    case ParseErrorKind::UnknownVerb: return "unknown-verb";
    case ParseErrorKind::Arity: return "arity";
    case ParseErrorKind::BadTime: return "bad-time";
    case ParseErrorKind::TimeOrder: return "time-order";
    case ParseErrorKind::Ordering: return "ordering";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t column, const std::string& message)
    : std::runtime_error("col " + std::to_string(column) + ": " + std::string(to_string(kind)) +
                         ": " + message),
      kind_(kind),
      column_(column) {}

ActionStep parse_line(std::string_view text) {
  Cursor cur(text);
  ActionStep step;

  cur.skip_space();
  if (!cur.consume("[")) fail(ParseErrorKind::Bracketing, cur.column(), "expected '[' before verb");
  const auto verb_col = cur.column();
  auto verb_text = cur.until(']', "[<>()");
  if (!verb_text) fail(ParseErrorKind::Bracketing, verb_col, "unterminated '[' verb bracket");
  auto verb = verb_from_name(trim(*verb_text));
  if (!verb) {
    fail(ParseErrorKind::UnknownVerb, verb_col, "unknown verb '" + std::string(trim(*verb_text)) + "'");
  }
  step.verb = *verb;

  cur.skip_space();
  while (cur.peek() == '<') {
    cur.consume("<");
    const auto col = cur.column();
    auto obj = cur.until('>', "<[]()");
    if (!obj) fail(ParseErrorKind::Bracketing, col, "unterminated '<' object bracket");
    auto token = trim(*obj);
    if (token.empty()) fail(ParseErrorKind::Bracketing, col, "empty object");
    step.objects.emplace_back(token);
    cur.skip_space();
  }
  if (step.objects.size() != verb_arity(step.verb)) {
    fail(ParseErrorKind::Arity, verb_col,
         "'" + std::string(verb_name(step.verb)) + "' takes " +
             std::to_string(verb_arity(step.verb)) + " object(s), got " +
             std::to_string(step.objects.size()));
  }

  if (!cur.consume("(")) fail(ParseErrorKind::Bracketing, cur.column(), "expected '(' before times");
  cur.skip_space();
  auto start_col = cur.column();
  auto start = cur.time();
  if (!start) fail(ParseErrorKind::BadTime, start_col, "unparsable start time");
  cur.skip_space();
  if (!(cur.consume("--") || cur.consume("-") || cur.consume(kEnDash))) {
    fail(ParseErrorKind::BadTime, cur.column(), "expected '-' between times");
  }
  cur.skip_space();
  const auto end_col = cur.column();
  auto end = cur.time();
  if (!end) fail(ParseErrorKind::BadTime, end_col, "unparsable end time");
  cur.skip_space();
  if (!cur.consume(")")) fail(ParseErrorKind::Bracketing, cur.column(), "expected ')' after times");
  if (*start > *end) {
    fail(ParseErrorKind::TimeOrder, start_col,
         "start " + format_time(*start) + " is after end " + format_time(*end));
  }
  step.start = *start;
  step.end = *end;

  cur.skip_space();
  if (!cur.consume("(")) fail(ParseErrorKind::Bracketing, cur.column(), "expected '(' before room");
  const auto room_col = cur.column();
  auto room = cur.until(')', "()<>[]");
  if (!room) fail(ParseErrorKind::Bracketing, room_col, "unterminated room annotation");
  if (trim(*room).empty()) fail(ParseErrorKind::Bracketing, room_col, "empty room");
  step.room = std::string(trim(*room));

  cur.skip_space();
  if (!cur.done()) fail(ParseErrorKind::Bracketing, cur.column(), "trailing text after room");
  return step;
}

std::string render_step(const ActionStep& step) {
  std::string out = "[";
  out += verb_name(step.verb);
  out += "]";
  for (const auto& o : step.objects) {
    out += " <";
    out += o;
    out += ">";
  }
  out += " (" + format_time(step.start) + " - " + format_time(step.end) + ") (" + step.room + ")";
  return out;
}

bool Script::append(ActionStep step, std::string activity) {
  int day = 0;
  if (!steps_.empty()) {
    day = contexts_.back().day;
    const int prev = steps_.back().start.minutes();
    const int cur = step.start.minutes();
    if (cur < prev) {
      if (prev - cur > kHalfDayMinutes) {
        ++day;
      } else {
        return false;
      }
    }
  }
  steps_.push_back(std::move(step));
  contexts_.push_back(StepContext{day, std::move(activity)});
  return true;
}

int Script::absolute_start(std::size_t i) const {
  return contexts_.at(i).day * 1440 + steps_.at(i).start.minutes();
}

int Script::absolute_end(std::size_t i) const {
  return contexts_.at(i).day * 1440 + steps_.at(i).end.minutes();
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_csv(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

constexpr std::string_view kActivityMarker = "# activity:";

}  // namespace

ParsedScript parse_script(std::string_view text, ScriptMetadata metadata) {
  ParsedScript result;
  const auto lines = split_lines(text);
  std::size_t i = 0;

  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i < lines.size() && trim(lines[i]) == "---") {
    std::size_t j = i + 1;
    while (j < lines.size() && trim(lines[j]) != "---") ++j;
    if (j < lines.size()) {
      for (std::size_t k = i + 1; k < j; ++k) {
        auto line = trim(lines[k]);
        auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const auto key = to_lower(trim(line.substr(0, colon)));
        const auto value = std::string(trim(line.substr(colon + 1)));
        if (key == "persona") metadata.persona = value;
        else if (key == "day") metadata.day = value;
        else if (key == "activity") metadata.activity = value;
        else if (key == "labels") metadata.label_candidates = split_csv(value);
        else if (key == "walk_speed") {
          double speed = 0.0;
          auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), speed);
          if (ec == std::errc{} && ptr == value.data() + value.size() && speed > 0.0) {
            metadata.walk_speed = speed;
          } else {
            result.diagnostics.push_back({k + 1, 1, ParseErrorKind::Bracketing,
                                          "walk_speed is not a positive number: '" + value + "'"});
          }
        }
      }
      i = j + 1;
    }
  }

  result.script.metadata = metadata;
  std::string activity = metadata.activity;
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.substr(0, kActivityMarker.size()) == kActivityMarker) {
        activity = std::string(trim(line.substr(kActivityMarker.size())));
      }
      continue;
    }
    try {
      auto step = parse_line(lines[i]);
      if (!result.script.append(step, activity)) {
        result.diagnostics.push_back({i + 1, 1, ParseErrorKind::Ordering,
                                      "step starts before the previous step"});
      }
    } catch (const ParseError& e) {
      // Columns are relative to the untrimmed line.
      result.diagnostics.push_back({i + 1, e.column(), e.kind(), e.what()});
    }
  }
  return result;
}

std::string render_script(const Script& script) {
  std::string out;
  const auto& m = script.metadata;
  if (!m.persona.empty() || !m.day.empty() || !m.activity.empty() || !m.label_candidates.empty() ||
      m.walk_speed) {
    out += "---\n";
    if (!m.persona.empty()) out += "persona: " + m.persona + "\n";
    if (!m.day.empty()) out += "day: " + m.day + "\n";
    if (!m.activity.empty()) out += "activity: " + m.activity + "\n";
    if (m.walk_speed) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *m.walk_speed);
      out += std::string("walk_speed: ") + buf + "\n";
    }
    if (!m.label_candidates.empty()) {
      out += "labels: ";
      for (std::size_t i = 0; i < m.label_candidates.size(); ++i) {
        if (i) out += ", ";
        out += m.label_candidates[i];
      }
      out += "\n";
    }
    out += "---\n";
  }
  std::string current = m.activity;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& activity = script.contexts()[i].activity;
    if (activity != current) {
      out += std::string(kActivityMarker) + " " + activity + "\n";
      current = activity;
    }
    out += render_step(script.steps()[i]) + "\n";
  }
  return out;
}

}  // namespace ambisim::script
