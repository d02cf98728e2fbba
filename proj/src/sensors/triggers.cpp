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

#include <algorithm>

#include "ambisim/sensors.hpp"

namespace ambisim::sensors {

std::string_view to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::Door: return "door";
    case SensorKind::Device: return "device";
    case SensorKind::Motion: return "motion";
  }
  return "?";
}

std::string_view to_string(SensorValue value) {
  switch (value) {
    case SensorValue::On: return "ON";
    case SensorValue::Off: return "OFF";
    case SensorValue::Open: return "OPEN";
    case SensorValue::Close: return "CLOSE";
  }
  return "?";
}

std::optional<SensorKind> kind_from_string(std::string_view s) {
  for (auto k : {SensorKind::Door, SensorKind::Device, SensorKind::Motion}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<SensorValue> value_from_string(std::string_view s) {
  for (auto v : {SensorValue::On, SensorValue::Off, SensorValue::Open, SensorValue::Close}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::vector<Detection> detect_motion(const sim::Trajectory& trajectory, const SensorSuite& suite) {
  std::vector<Detection> out;
  for (std::size_t k = 0; k < trajectory.samples.size(); ++k) {
    const auto& p = trajectory.samples[k].position;
    for (const auto& s : suite.motion) {
      if (env::distance(p, s.position) <= s.radius) out.push_back({k, s.id, s.room, p});
    }
  }
  return out;
}

std::vector<SensorEvent> motion_triggers(const sim::Trajectory& trajectory,
                                         const SensorSuite& suite, const sim::SimParams& params) {
  const auto& samples = trajectory.samples;
  const std::size_t n = samples.size();
  // Movement flags are shared by every sensor.
  std::vector<char> moving(n, 0);
  for (std::size_t k = 1; k < n; ++k) {
    moving[k] = env::distance(samples[k].position, samples[k - 1].position) > params.jitter_eps;
  }

  std::vector<std::vector<SensorEvent>> per_sensor;
  per_sensor.reserve(suite.motion.size());
  for (const auto& s : suite.motion) {
    std::vector<SensorEvent> events;
    bool active = false;
    for (std::size_t k = 0; k < n; ++k) {
      const bool now = moving[k] && env::distance(samples[k].position, s.position) <= s.radius;
      if (now != active) {
        events.push_back({samples[k].t, s.id, SensorKind::Motion,
                          now ? SensorValue::On : SensorValue::Off, s.room, std::nullopt});
        active = now;
      }
    }
    per_sensor.push_back(std::move(events));
  }
  return merge_events(per_sensor);
}

std::vector<SensorEvent> door_device_events(const sim::StateTransitionLog& transitions,
                                            const SensorSuite& suite, bool emit_reverse) {
  using env::ObjectState;
  std::vector<SensorEvent> out;
  for (const auto& logged : transitions) {
    const auto& tr = logged.transition;
    const BoundSensor* sensor = nullptr;
    SensorValue value{};
    if (tr.from_state == ObjectState::Closed && tr.to_state == ObjectState::Open) {
      sensor = suite.door_for(tr.object_id);
      value = SensorValue::Open;
    } else if (tr.from_state == ObjectState::Off && tr.to_state == ObjectState::On) {
      sensor = suite.device_for(tr.object_id);
      value = SensorValue::On;
    } else if (emit_reverse && tr.from_state == ObjectState::Open &&
               tr.to_state == ObjectState::Closed) {
      sensor = suite.door_for(tr.object_id);
      value = SensorValue::Close;
    } else if (emit_reverse && tr.from_state == ObjectState::On && tr.to_state == ObjectState::Off) {
      sensor = suite.device_for(tr.object_id);
      value = SensorValue::Off;
    }
    if (!sensor) continue;
    out.push_back({tr.timestamp, sensor->id, sensor->kind, value, tr.room, tr.object_class});
  }
  return out;
}

std::vector<SensorEvent> merge_events(const std::vector<std::vector<SensorEvent>>& streams) {
  std::vector<SensorEvent> out;
  std::size_t total = 0;
  for (const auto& s : streams) total += s.size();
  out.reserve(total);
  for (const auto& s : streams) out.insert(out.end(), s.begin(), s.end());
  std::stable_sort(out.begin(), out.end(), [](const SensorEvent& a, const SensorEvent& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.sensor_id < b.sensor_id;
  });
  return out;
}

}  // namespace ambisim::sensors
