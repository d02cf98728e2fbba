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

// Executes a grounded Script against a HomeLayout: plans paths, advances the
// agent on a fixed time grid and replays state-changing actions on a private
// copy of the environment graph.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ambisim/action_script.hpp"
#include "ambisim/common.hpp"
#include "ambisim/env.hpp"

namespace ambisim::sim {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimParams {
  double dt = 0.2;           // seconds
  double walk_speed = 1.2;   // m/s
  double run_speed = 3.0;    // m/s
  double jitter_eps = 0.1;   // meters; read by motion triggers
  std::chrono::year_month_day epoch_date{std::chrono::year{2024}, std::chrono::January,
                                         std::chrono::day{1}};

  void validate() const;
  /// dt on the integer microsecond grid.
  std::int64_t dt_micros() const;
};

/// Waypoints from `from` to `to`. Same room: [from, to] (or [from] when the
/// points coincide). Otherwise a fewest-hop room sequence, crossing through
/// declared door anchors, or through shared-wall midpoints and intermediate
/// room centroids when the layout declares no doors. Throws SimError when
/// the rooms are not connected.
std::vector<env::Vec3> plan_path(const env::HomeLayout& layout, const env::Vec3& from,
                                 const env::Vec3& to, std::string_view from_room,
                                 std::string_view to_room);

struct TrajectorySample {
  Timestamp t;
  env::Vec3 position;
  std::int32_t step_index = -1;
};

/// Time slot a step occupies. Steps that share a start minute split that
/// minute evenly in listed order; each step lasts until the next one starts.
struct StepWindow {
  Timestamp start;
  Timestamp end;
};

std::vector<StepWindow> schedule_steps(const script::Script& script, Timestamp day_zero);

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<StepWindow> steps;

  Timestamp start() const { return samples.front().t; }
  Timestamp end() const { return samples.back().t; }
};

struct LoggedTransition {
  env::StateTransition transition;
  std::size_t step_index = 0;
};

using StateTransitionLog = std::vector<LoggedTransition>;

enum class Severity { Warning, Error };

struct StepIssue {
  std::size_t step_index = 0;
  Severity severity = Severity::Warning;
  std::string message;
};

struct SimResult {
  Trajectory trajectory;
  StateTransitionLog transitions;
  std::vector<StepIssue> issues;
  env::EnvironmentGraph final_graph;
};

/// Id of the node that represents the agent in the run's graph.
inline constexpr std::string_view kAgentId = "character";

/// Throws SimError for an empty script, a step naming an unknown room, or a
/// path between disconnected rooms. Object-level problems (unknown object,
/// forbidden state, put without a grab) become StepIssues.
SimResult simulate(const script::Script& script, const env::HomeLayout& layout,
                   const SimParams& params);

}  // namespace ambisim::sim
