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

#include "ambisim/dataset.hpp"

namespace ambisim::dataset {

namespace {

std::string_view kind_word(sensors::SensorKind kind) {
  switch (kind) {
    case sensors::SensorKind::Motion: return "Motion";
    case sensors::SensorKind::Door: return "Door";
    case sensors::SensorKind::Device: return "Device";
  }
  return "?";
}

}  // namespace

std::string_view to_string(TdostVariant variant) {
  return variant == TdostVariant::Basic ? "basic" : "temporal";
}

std::optional<TdostVariant> variant_from_string(std::string_view s) {
  if (s == "basic") return TdostVariant::Basic;
  if (s == "temporal") return TdostVariant::Temporal;
  return std::nullopt;
}

std::string number_words(int n) {
  static constexpr std::string_view kOnes[] = {
      "zero",    "one",     "two",       "three",    "four",     "five",    "six",
      "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
  static constexpr std::string_view kTens[] = {"", "", "twenty", "thirty", "forty", "fifty"};
  if (n < 0 || n > 59) throw DatasetError("number_words supports 0..59, got " + std::to_string(n));
  if (n < 20) return std::string(kOnes[n]);
  std::string out(kTens[n / 10]);
  if (n % 10) {
    out += ' ';
    out += kOnes[n % 10];
  }
  return out;
}

std::string tdost_basic(const sensors::SensorEvent& event) {
  std::string out(kind_word(event.kind));
  out += " sensor in ";
  out += to_lower(event.room);
  out += " fired with value ";
  out += sensors::to_string(event.value);
  return out;
}

std::string tdost_temporal(const sensors::SensorEvent& event) {
  const auto minutes_of_day = micros_of_day(event.timestamp) / kMicrosPerMinute;
  const int hour = static_cast<int>(minutes_of_day / 60);
  const int minute = static_cast<int>(minutes_of_day % 60);
  const int hour12 = hour % 12 == 0 ? 12 : hour % 12;
  return tdost_basic(event) + " at " + number_words(hour12) + " hours " + number_words(minute) +
         " minutes " + (hour < 12 ? "AM" : "PM");
}

std::string tdost(const sensors::SensorEvent& event, TdostVariant variant) {
  return variant == TdostVariant::Basic ? tdost_basic(event) : tdost_temporal(event);
}

}  // namespace ambisim::dataset
