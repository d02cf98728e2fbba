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

// Virtual ambient sensors: motion sensors placed near room corners by room
// size, plus door and device sensors bound to openable and switchable
// objects. Events are derived from a trajectory and a transition log.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ambisim/common.hpp"
#include "ambisim/env.hpp"
#include "ambisim/sim.hpp"

namespace ambisim::sensors {

class SensorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultRadius = 5.0;
inline constexpr double kCornerInset = 0.3;

/// 1 sensor up to 30 m^2, 2 up to 60 m^2, 3 above.
int determine_sensor_count(double area);

/// Corners in fixed order (min x, min z), (max x, max z), (min x, max z),
/// inset 0.3 m along x and z and 0.3 m below the ceiling.
std::vector<env::Vec3> calculate_sensor_positions(const env::Room& room, int count);

struct MotionSensor {
  std::string id;
  std::string room;
  env::Vec3 position;
  double radius = kDefaultRadius;

  friend bool operator==(const MotionSensor&, const MotionSensor&) = default;
};

enum class SensorKind { Door, Device, Motion };  // tie-break order when merging
enum class SensorValue { On, Off, Open, Close };

std::string_view to_string(SensorKind kind);
std::string_view to_string(SensorValue value);
std::optional<SensorKind> kind_from_string(std::string_view s);
std::optional<SensorValue> value_from_string(std::string_view s);

/// Door or device sensor attached to a scene object.
struct BoundSensor {
  std::string id;
  SensorKind kind = SensorKind::Door;
  std::string object_id;
  std::string object_class;
  std::string room;
  env::Vec3 position;

  friend bool operator==(const BoundSensor&, const BoundSensor&) = default;
};

struct SensorSuite {
  std::vector<MotionSensor> motion;
  std::vector<BoundSensor> doors;
  std::vector<BoundSensor> devices;

  friend bool operator==(const SensorSuite&, const SensorSuite&) = default;

  const BoundSensor* door_for(std::string_view object_id) const;
  const BoundSensor* device_for(std::string_view object_id) const;
  std::size_t size() const { return motion.size() + doors.size() + devices.size(); }
};

/// Motion sensors M001.. in room order; door sensors D001.. over CAN_OPEN
/// objects, then device sensors continuing the D numbering over HAS_SWITCH
/// objects.
SensorSuite instrument(const env::HomeLayout& layout, double radius = kDefaultRadius);

/// Sensor map document (ids, kinds, rooms, positions, radii, object bindings).
nlohmann::json sensor_map_json(const SensorSuite& suite);
SensorSuite sensor_suite_from_json(const nlohmann::json& document);

struct SensorEvent {
  Timestamp timestamp;
  std::string sensor_id;
  SensorKind kind = SensorKind::Motion;
  SensorValue value = SensorValue::On;
  std::string room;
  std::optional<std::string> object_class;

  friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

struct Detection {
  std::size_t sample_index = 0;
  std::string sensor_id;
  std::string room;
  env::Vec3 position;
};

/// One record per (sample, sensor) with |p(t) - s| <= r.
std::vector<Detection> detect_motion(const sim::Trajectory& trajectory, const SensorSuite& suite);

/// A sample is active for a sensor when it lies within the radius and moved
/// more than jitter_eps since the previous sample. Each maximal active run
/// yields ON at its first sample and OFF at the first inactive sample after
/// it (no OFF if the run reaches the end of the trajectory).
std::vector<SensorEvent> motion_triggers(const sim::Trajectory& trajectory,
                                         const SensorSuite& suite, const sim::SimParams& params);

/// CLOSED->OPEN gives Door OPEN, OFF->ON gives Device ON; with emit_reverse
/// the opposite transitions give CLOSE and OFF.
std::vector<SensorEvent> door_device_events(const sim::StateTransitionLog& transitions,
                                            const SensorSuite& suite, bool emit_reverse = true);

/// Chronological merge; equal timestamps order by (kind, sensor id), stable
/// otherwise.
std::vector<SensorEvent> merge_events(const std::vector<std::vector<SensorEvent>>& streams);

}  // namespace ambisim::sensors
