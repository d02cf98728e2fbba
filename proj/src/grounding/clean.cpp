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

#include <regex>

#include "ambisim/common.hpp"
#include "ambisim/grounding.hpp"

namespace ambisim::grounding {

namespace {

// Byte-level patterns; the en-dash is matched as its UTF-8 sequence.
const std::string kDash = "(?:--|-|\xE2\x80\x93|\xE2\x80\x94)";
const std::string kClock = "\\d{1,2}:\\d{2}";

const std::regex& interval_header() {
  static const std::regex re("^(" + kClock + ")\\s*" + kDash + "\\s*(" + kClock +
                             ")\\s*,\\s*(.+)$");
  return re;
}

const std::regex& activity_header() {
  static const std::regex re("^([A-Za-z][A-Za-z0-9_ ]*?)\\s*:?\\s*\\(\\s*" + kClock + "\\s*" +
                             kDash + "\\s*" + kClock + "\\s*\\)(?:\\s*\\([^)]*\\))?\\s*$");
  return re;
}

const std::regex& activity_label() {
  static const std::regex re("^activity\\s*(?:name)?\\s*:\\s*(.+)$", std::regex::icase);
  return re;
}

const std::regex& schedule_line() {
  static const std::regex re("^\\(\\s*" + kClock + "\\s*" + kDash + "\\s*" + kClock +
                             "\\s*\\)(?:\\s*\\([^)]*\\))?\\s*$");
  return re;
}

const std::regex& day_label() {
  static const std::regex re(
      "^(?:day\\s*\\d+|monday|tuesday|wednesday|thursday|friday|saturday|sunday|weekday|"
      "weekend)\\b.*$",
      std::regex::icase);
  return re;
}

const std::regex& step_prefix() {
  static const std::regex re("^(?:step\\s*\\d+\\s*[:.)]|\\d+\\s*[.)]|[-*])\\s*",
                             std::regex::icase);
  return re;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::optional<script::TimeOfDay> read_clock(std::string_view s, std::size_t& pos) {
  std::size_t p = pos;
  int hour = 0, digits = 0;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])) && digits < 2) {
    hour = hour * 10 + (s[p] - '0');
    ++p;
    ++digits;
  }
  if (digits == 0 || p >= s.size() || s[p] != ':') return std::nullopt;
  ++p;
  if (p + 2 > s.size() || !std::isdigit(static_cast<unsigned char>(s[p])) ||
      !std::isdigit(static_cast<unsigned char>(s[p + 1]))) {
    return std::nullopt;
  }
  const int minute = (s[p] - '0') * 10 + (s[p + 1] - '0');
  p += 2;
  script::TimeOfDay t{hour, minute};
  if (!t.valid()) return std::nullopt;
  pos = p;
  return t;
}

std::string strip_step_prefix(const std::string& text) {
  return std::string(trim(std::regex_replace(text, step_prefix(), "",
                                             std::regex_constants::format_first_only)));
}

}  // namespace

namespace {

// A wrapped command continues on the next line when the previous line is an
// incomplete command (no interval, or no room) and the joined text parses.
bool completes(const std::string& previous, std::string_view next) {
  const auto body = strip_step_prefix(previous);
  if (body.empty() || body.front() != '[') return false;
  const auto alone = parse_raw_command(body);
  if (const auto* cmd = std::get_if<RawCommand>(&alone); cmd && cmd->room) return false;
  const auto joined = parse_raw_command(body + " " + std::string(next));
  return std::holds_alternative<RawCommand>(joined);
}

}  // namespace

std::variant<RawCommand, std::string> parse_raw_command(std::string_view text) {
  RawCommand cmd;
  std::size_t p = 0;
  auto skip = [&] {
    while (p < text.size() && is_space(text[p])) ++p;
  };
  skip();
  if (p >= text.size() || text[p] != '[') return std::string("missing '[' verb bracket");
  const auto close = text.find(']', p);
  if (close == std::string_view::npos) return std::string("unterminated verb bracket");
  cmd.verb = std::string(trim(text.substr(p + 1, close - p - 1)));
  if (cmd.verb.empty()) return std::string("empty verb");
  p = close + 1;
  skip();
  while (p < text.size() && text[p] == '<') {
    const auto gt = text.find('>', p);
    if (gt == std::string_view::npos) return std::string("unterminated object bracket");
    auto obj = trim(text.substr(p + 1, gt - p - 1));
    if (obj.empty()) return std::string("empty object");
    cmd.objects.emplace_back(obj);
    p = gt + 1;
    skip();
  }
  if (p >= text.size() || text[p] != '(') return std::string("missing time interval");
  ++p;
  skip();
  auto start = read_clock(text, p);
  if (!start) return std::string("malformed start time");
  skip();
  if (text.substr(p, 2) == "--") p += 2;
  else if (p < text.size() && text[p] == '-') p += 1;
  else if (text.substr(p, 3) == "\xE2\x80\x93" || text.substr(p, 3) == "\xE2\x80\x94") p += 3;
  else return std::string("missing '-' between times");
  skip();
  auto end = read_clock(text, p);
  if (!end) return std::string("malformed end time");
  skip();
  if (p >= text.size() || text[p] != ')') return std::string("unterminated time interval");
  ++p;
  cmd.start = *start;
  cmd.end = *end;
  skip();
  if (p < text.size()) {
    if (text[p] != '(') return std::string("unexpected text after times");
    const auto rp = text.find(')', p);
    if (rp == std::string_view::npos) return std::string("unterminated room annotation");
    auto room = trim(text.substr(p + 1, rp - p - 1));
    if (room.empty()) return std::string("empty room annotation");
    cmd.room = std::string(room);
    p = rp + 1;
    skip();
    if (p < text.size()) return std::string("unexpected text after room");
  }
  return cmd;
}

std::string render_raw_command(const RawCommand& command) {
  std::string out = "[" + command.verb + "]";
  for (const auto& o : command.objects) out += " <" + o + ">";
  out += " (" + script::format_time(command.start) + " - " + script::format_time(command.end) + ")";
  if (command.room) out += " (" + *command.room + ")";
  return out;
}

CleanedOutput clean_output(std::string_view raw_text) {
  struct Logical {
    std::string text;
    std::size_t line;
  };
  // Re-join commands that were wrapped onto a following line.
  std::vector<Logical> logical;
  {
    std::size_t start = 0, line_no = 0;
    while (start <= raw_text.size()) {
      const auto nl = raw_text.find('\n', start);
      const auto piece = raw_text.substr(
          start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
      ++line_no;
      const auto t = trim(piece);
      const bool continuation = !t.empty() && (t.front() == '<' || t.front() == '(') &&
                                !logical.empty() && completes(logical.back().text, t);
      if (continuation) {
        logical.back().text += " " + std::string(t);
      } else {
        logical.push_back({std::string(t), line_no});
      }
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }

  CleanedOutput out;
  std::optional<std::string> room;
  std::string activity;
  std::smatch m;
  for (auto& [text, line_no] : logical) {
    if (text.empty()) continue;
    if (text.front() == '#') {
      static const std::regex marker("^#\\s*activity\\s*:\\s*(.*)$", std::regex::icase);
      if (std::regex_match(text, m, marker)) {
        activity = std::string(trim(m[1].str()));
        room.reset();
      }
      continue;
    }
    std::string body = strip_step_prefix(text);
    if (!body.empty() && body.front() == '[') {
      auto parsed = parse_raw_command(body);
      if (auto* cmd = std::get_if<RawCommand>(&parsed)) {
        if (!cmd->room && room) cmd->room = room;
        out.lines.push_back({render_raw_command(*cmd), activity, line_no});
      } else {
        out.lines.push_back({body, activity, line_no});
      }
      continue;
    }
    if (std::regex_match(body, m, interval_header())) {
      room = std::string(trim(m[3].str()));
      continue;
    }
    if (std::regex_match(body, m, activity_label()) || std::regex_match(body, m, activity_header())) {
      activity = std::string(trim(m[1].str()));
      room.reset();
      continue;
    }
    if (std::regex_match(body, schedule_line()) || std::regex_match(body, day_label()) ||
        body == "---") {
      continue;
    }
    ++out.dropped_unrecognized;
  }
  return out;
}

}  // namespace ambisim::grounding
