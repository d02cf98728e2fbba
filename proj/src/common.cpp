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

#include "ambisim/common.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace ambisim {

namespace chr = std::chrono;

Timestamp midnight(chr::year_month_day date) {
  if (!date.ok()) throw std::invalid_argument("invalid calendar date");
  const auto days = chr::sys_days{date}.time_since_epoch().count();
  return Timestamp{static_cast<std::int64_t>(days) * kMicrosPerDay};
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

chr::year_month_day date_of(Timestamp t) {
  const auto days = floor_div(t.micros, kMicrosPerDay);
  return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

std::int64_t micros_of_day(Timestamp t) {
  return t.micros - floor_div(t.micros, kMicrosPerDay) * kMicrosPerDay;
}

std::string format_date(chr::year_month_day date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

std::string format_timestamp(Timestamp t) {
  const auto date = date_of(t);
  std::int64_t rem = micros_of_day(t);
  const auto hours = rem / (60 * kMicrosPerMinute);
  rem -= hours * 60 * kMicrosPerMinute;
  const auto minutes = rem / kMicrosPerMinute;
  rem -= minutes * kMicrosPerMinute;
  const auto seconds = rem / kMicrosPerSecond;
  const auto micros = rem - seconds * kMicrosPerSecond;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s %02lld:%02lld:%02lld.%06lld",
                format_date(date).c_str(), static_cast<long long>(hours),
                static_cast<long long>(minutes), static_cast<long long>(seconds),
                static_cast<long long>(micros));
  return buf;
}

namespace {

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) throw std::invalid_argument("truncated date-time");
  int value = 0;
  const auto* first = text.data() + pos;
  const auto* last = first + width;
  for (const auto* p = first; p != last; ++p) {
    if (!std::isdigit(static_cast<unsigned char>(*p))) {
      throw std::invalid_argument("non-digit in date-time: " + std::string(text));
    }
  }
  std::from_chars(first, last, value);
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument("malformed date-time: " + std::string(text));
  }
}

}  // namespace

chr::year_month_day parse_date(std::string_view text) {
  if (text.size() != 10) throw std::invalid_argument("malformed date: " + std::string(text));
  const int y = parse_fixed(text, 0, 4);
  expect_char(text, 4, '-');
  const int m = parse_fixed(text, 5, 2);
  expect_char(text, 7, '-');
  const int d = parse_fixed(text, 8, 2);
  chr::year_month_day date{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                           chr::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw std::invalid_argument("invalid date: " + std::string(text));
  return date;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() != 26) {
    throw std::invalid_argument("malformed date-time: " + std::string(text));
  }
  const auto date = parse_date(text.substr(0, 10));
  expect_char(text, 10, ' ');
  const int hh = parse_fixed(text, 11, 2);
  expect_char(text, 13, ':');
  const int mm = parse_fixed(text, 14, 2);
  expect_char(text, 16, ':');
  const int ss = parse_fixed(text, 17, 2);
  expect_char(text, 19, '.');
  const int us = parse_fixed(text, 20, 6);
  if (hh > 23 || mm > 59 || ss > 59) {
    throw std::invalid_argument("time out of range: " + std::string(text));
  }
  return Timestamp{midnight(date).micros + hh * 60 * kMicrosPerMinute +
                   mm * kMicrosPerMinute + ss * kMicrosPerSecond + us};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
  while (true) {
    const std::uint64_t r = splitmix64(state);
    if (r >= limit) return r % bound;
  }
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view text) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

}  // namespace ambisim
