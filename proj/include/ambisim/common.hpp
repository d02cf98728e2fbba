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

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ambisim {

/// Naive civil time: microseconds since 1970-01-01 00:00:00, no time zone.
struct Timestamp {
  std::int64_t micros = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;
inline constexpr std::int64_t kMicrosPerMinute = 60 * kMicrosPerSecond;
inline constexpr std::int64_t kMicrosPerDay = 1440 * kMicrosPerMinute;

/// Midnight at the start of `date`.
Timestamp midnight(std::chrono::year_month_day date);
std::chrono::year_month_day date_of(Timestamp t);
/// Microseconds elapsed since the midnight that starts t's day.
std::int64_t micros_of_day(Timestamp t);

/// `YYYY-MM-DD HH:MM:SS.ffffff`
std::string format_timestamp(Timestamp t);
/// Inverse of format_timestamp; throws std::invalid_argument on malformed text.
Timestamp parse_timestamp(std::string_view text);

/// `YYYY-MM-DD`
std::string format_date(std::chrono::year_month_day date);
std::chrono::year_month_day parse_date(std::string_view text);

/// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes);

/// splitmix64 step: advances `state` and returns the next 64-bit output.
std::uint64_t splitmix64(std::uint64_t& state);
/// Unbiased draw from [0, bound); bound must be positive.
std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound);

/// Deterministic Fisher-Yates shuffle driven by splitmix64.
template <typename T>
void shuffle_in_place(std::vector<T>& items, std::uint64_t& state) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(state, i));
    std::swap(items[i - 1], items[j]);
  }
}

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);

}  // namespace ambisim
