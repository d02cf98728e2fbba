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

// Template-driven day-routine synthesizer. It writes free-form schedule text in
// the shape produced by chat models (activity headers, numbered or bulleted
// command lines, occasionally wrapped commands), addressed to the rooms and
// objects of one layout, so the full grounding path can be exercised offline.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambisim/env.hpp"

namespace ambisim::corpus {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Room roles the activity templates are written against.
inline constexpr const char* kRoles[] = {"bedroom", "bathroom", "kitchen", "livingroom", "office"};

/// Role -> room name. A role binds to a room of the same name, else to the
/// first room whose name contains a known alias (e.g. "washroom" for
/// bathroom, "lounge" for livingroom, "study" for office). "office" falls
/// back to the living room.
std::map<std::string, std::string> infer_room_roles(const env::HomeLayout& layout);

/// The activity names the synthesizer can emit, in schedule order.
const std::vector<std::string>& activity_names();

struct DaySpec {
  std::string persona = "resident";
  int day_number = 1;
  std::uint64_t seed = 0;
};

/// One day of raw schedule text for `layout`. Deterministic in (layout, spec).
/// Throws CorpusError when a role or an object class a mandatory activity
/// needs is missing from the layout.
std::string synthesize_day(const env::HomeLayout& layout, const DaySpec& spec);

}  // namespace ambisim::corpus
