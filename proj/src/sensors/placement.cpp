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

#include <cmath>
#include <cstdio>

#include "ambisim/sensors.hpp"

namespace ambisim::sensors {

using nlohmann::json;

int determine_sensor_count(double area) {
  if (!std::isfinite(area) || area <= 0.0) {
    throw SensorError("room area must be positive, got " + std::to_string(area));
  }
  if (area <= 30.0) return 1;
  if (area <= 60.0) return 2;
  return 3;
}

std::vector<env::Vec3> calculate_sensor_positions(const env::Room& room, int count) {
  if (count < 1 || count > 3) {
    throw SensorError("sensor count must be 1, 2 or 3, got " + std::to_string(count));
  }
  const auto& lo = room.bbox_min;
  const auto& hi = room.bbox_max;
  if (hi.x - lo.x <= 2 * kCornerInset || hi.z - lo.z <= 2 * kCornerInset ||
      hi.y - lo.y <= kCornerInset) {
    throw SensorError("room '" + room.name + "' is too small for corner insets");
  }
  const double y = hi.y - kCornerInset;
  const env::Vec3 corners[] = {
      {lo.x + kCornerInset, y, lo.z + kCornerInset},
      {hi.x - kCornerInset, y, hi.z - kCornerInset},
      {lo.x + kCornerInset, y, hi.z - kCornerInset},
  };
  return {corners, corners + count};
}

const BoundSensor* SensorSuite::door_for(std::string_view object_id) const {
  for (const auto& s : doors) {
    if (s.object_id == object_id) return &s;
  }
  return nullptr;
}

const BoundSensor* SensorSuite::device_for(std::string_view object_id) const {
  for (const auto& s : devices) {
    if (s.object_id == object_id) return &s;
  }
  return nullptr;
}

namespace {

std::string numbered(char prefix, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%03zu", prefix, n);
  return buf;
}

json vec_json(const env::Vec3& v) { return json::array({v.x, v.y, v.z}); }

env::Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw SensorError("sensor map: expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

SensorSuite instrument(const env::HomeLayout& layout, double radius) {
  if (!(radius > 0.0)) throw SensorError("detection radius must be > 0");
  SensorSuite suite;
  std::size_t motion_id = 0;
  for (const auto& room : env::find_all_rooms(layout)) {
    const int count = determine_sensor_count(env::room_area(room));
    for (const auto& p : calculate_sensor_positions(room, count)) {
      suite.motion.push_back({numbered('M', ++motion_id), room.name, p, radius});
    }
  }
  std::size_t bound_id = 0;
  for (const auto& obj : layout.graph.nodes()) {
    if (obj.has(env::ObjectProperty::CanOpen)) {
      suite.doors.push_back({numbered('D', ++bound_id), SensorKind::Door, obj.id, obj.class_name,
                             obj.room, obj.position});
    }
  }
  for (const auto& obj : layout.graph.nodes()) {
    if (obj.has(env::ObjectProperty::HasSwitch)) {
      suite.devices.push_back({numbered('D', ++bound_id), SensorKind::Device, obj.id,
                               obj.class_name, obj.room, obj.position});
    }
  }
  return suite;
}

json sensor_map_json(const SensorSuite& suite) {
  json doc;
  doc["placement"] = {
      {"corner_order", json::array({"min_x_min_z", "max_x_max_z", "min_x_max_z"})},
      {"inset_m", kCornerInset},
      {"count_rule", "area<=30:1, 30<area<=60:2, area>60:3"},
  };
  doc["sensors"] = json::array();
  for (const auto& m : suite.motion) {
    doc["sensors"].push_back({{"id", m.id},
                              {"kind", "motion"},
                              {"room", m.room},
                              {"position", vec_json(m.position)},
                              {"radius", m.radius},
                              {"object", nullptr}});
  }
  for (const auto* group : {&suite.doors, &suite.devices}) {
    for (const auto& s : *group) {
      doc["sensors"].push_back({{"id", s.id},
                                {"kind", std::string(to_string(s.kind))},
                                {"room", s.room},
                                {"position", vec_json(s.position)},
                                {"radius", nullptr},
                                {"object", {{"id", s.object_id}, {"class", s.object_class}}}});
    }
  }
  return doc;
}

SensorSuite sensor_suite_from_json(const json& doc) {
  SensorSuite suite;
  if (!doc.contains("sensors") || !doc["sensors"].is_array()) {
    throw SensorError("sensor map: missing sensors array");
  }
  for (const auto& s : doc["sensors"]) {
    const auto kind = kind_from_string(s.at("kind").get<std::string>());
    if (!kind) throw SensorError("sensor map: unknown kind for " + s.at("id").get<std::string>());
    if (*kind == SensorKind::Motion) {
      suite.motion.push_back({s.at("id").get<std::string>(), s.at("room").get<std::string>(),
                              vec_from(s.at("position")), s.at("radius").get<double>()});
    } else {
      BoundSensor b{s.at("id").get<std::string>(),
                    *kind,
                    s.at("object").at("id").get<std::string>(),
                    s.at("object").at("class").get<std::string>(),
                    s.at("room").get<std::string>(),
                    vec_from(s.at("position"))};
      (*kind == SensorKind::Door ? suite.doors : suite.devices).push_back(std::move(b));
    }
  }
  return suite;
}

}  // namespace ambisim::sensors
