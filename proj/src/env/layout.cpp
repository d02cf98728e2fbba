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
#include <fstream>
#include <limits>
#include <unordered_set>

#include "ambisim/env.hpp"

namespace ambisim::env {

using nlohmann::json;

namespace {

constexpr double kContainTol = 1e-9;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw LayoutError(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

std::string read_string(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  auto s = value.get<std::string>();
  if (s.empty()) fail(path, "must be non-empty");
  return s;
}

Vec3 read_vec3(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) fail(path, "expected [x, y, z]");
  Vec3 v;
  double* dst[] = {&v.x, &v.y, &v.z};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!value[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    *dst[i] = value[i].get<double>();
  }
  if (!v.finite()) fail(path, "components must be finite");
  return v;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

bool footprints_overlap(const Room& a, const Room& b) {
  const double ox = std::min(a.bbox_max.x, b.bbox_max.x) - std::max(a.bbox_min.x, b.bbox_min.x);
  const double oz = std::min(a.bbox_max.z, b.bbox_max.z) - std::max(a.bbox_min.z, b.bbox_min.z);
  return ox > kContainTol && oz > kContainTol;
}

}  // namespace

bool Room::contains(const Vec3& p, double tol) const {
  return p.x >= bbox_min.x - tol && p.x <= bbox_max.x + tol && p.y >= bbox_min.y - tol &&
         p.y <= bbox_max.y + tol && p.z >= bbox_min.z - tol && p.z <= bbox_max.z + tol;
}

Vec3 Room::floor_centroid(double y) const {
  return {0.5 * (bbox_min.x + bbox_max.x), y, 0.5 * (bbox_min.z + bbox_max.z)};
}

double room_area(const Room& room) {
  return (room.bbox_max.x - room.bbox_min.x) * (room.bbox_max.z - room.bbox_min.z);
}

const Room* HomeLayout::find_room(std::string_view room_name) const {
  for (const auto& r : rooms) {
    if (r.name == room_name) return &r;
  }
  return nullptr;
}

std::optional<std::size_t> HomeLayout::room_index(std::string_view room_name) const {
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    if (rooms[i].name == room_name) return i;
  }
  return std::nullopt;
}

double HomeLayout::floor_height() const {
  double y = -std::numeric_limits<double>::infinity();
  for (const auto& r : rooms) y = std::max(y, r.bbox_min.y);
  return rooms.empty() ? 0.0 : y;
}

const std::vector<Room>& find_all_rooms(const HomeLayout& layout) { return layout.rooms; }

HomeLayout load_layout(const json& doc) {
  HomeLayout layout;
  if (!doc.is_object()) fail("$", "layout document must be a JSON object");
  layout.name = read_string(require(doc, "name", "$"), "$.name");

  const json& rooms = require(doc, "rooms", "$");
  if (!rooms.is_array()) fail("$.rooms", "expected an array");
  std::unordered_set<std::string> room_names;
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const std::string path = "$.rooms[" + std::to_string(i) + "]";
    Room room;
    room.name = read_string(require(rooms[i], "name", path), path + ".name");
    room.bbox_min = read_vec3(require(rooms[i], "bbox_min", path), path + ".bbox_min");
    room.bbox_max = read_vec3(require(rooms[i], "bbox_max", path), path + ".bbox_max");
    if (!(room.bbox_min.x < room.bbox_max.x && room.bbox_min.y < room.bbox_max.y &&
          room.bbox_min.z < room.bbox_max.z)) {
      fail(path, "room '" + room.name + "' requires bbox_min < bbox_max componentwise");
    }
    if (!room_names.insert(room.name).second) {
      fail(path + ".name", "duplicate room name '" + room.name + "'");
    }
    layout.rooms.push_back(std::move(room));
  }

  for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.rooms.size(); ++j) {
      if (footprints_overlap(layout.rooms[i], layout.rooms[j])) {
        fail("$.rooms", "footprints of '" + layout.rooms[i].name + "' and '" +
                            layout.rooms[j].name + "' overlap");
      }
    }
  }
  if (!layout.rooms.empty()) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& r : layout.rooms) {
      lo = std::max(lo, r.bbox_min.y);
      hi = std::min(hi, r.bbox_max.y);
    }
    if (!(lo < hi)) {
      fail("$.rooms", "room height ranges share no common floor band; multi-story layouts are "
                      "not supported");
    }
  }

  if (auto it = doc.find("objects"); it != doc.end()) {
    if (!it->is_array()) fail("$.objects", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& o = (*it)[i];
      const std::string path = "$.objects[" + std::to_string(i) + "]";
      SceneObject obj;
      obj.id = read_string(require(o, "id", path), path + ".id");
      obj.class_name = read_string(require(o, "class", path), path + ".class");
      obj.room = read_string(require(o, "room", path), path + ".room");
      obj.position = read_vec3(require(o, "position", path), path + ".position");
      if (auto p = o.find("properties"); p != o.end()) {
        if (!p->is_array()) fail(path + ".properties", "expected an array");
        for (std::size_t k = 0; k < p->size(); ++k) {
          const auto name = read_string((*p)[k], path + ".properties[" + std::to_string(k) + "]");
          auto prop = property_from_string(name);
          if (!prop) fail(path + ".properties", "unknown property '" + name + "'");
          obj.properties.insert(*prop);
        }
      }
      if (auto s = o.find("states"); s != o.end()) {
        if (!s->is_array()) fail(path + ".states", "expected an array");
        for (std::size_t k = 0; k < s->size(); ++k) {
          const auto name = read_string((*s)[k], path + ".states[" + std::to_string(k) + "]");
          auto st = state_from_string(name);
          if (!st) fail(path + ".states", "unknown state '" + name + "'");
          obj.states.insert(*st);
        }
      }

      const Room* room = layout.find_room(obj.room);
      if (!room) {
        fail(path, "object '" + obj.id + "' names missing room '" + obj.room + "'");
      }
      if (!room->contains(obj.position)) {
        fail(path, "object '" + obj.id + "' lies outside room '" + obj.room + "'");
      }
      const bool open = obj.in_state(ObjectState::Open), closed = obj.in_state(ObjectState::Closed);
      const bool on = obj.in_state(ObjectState::On), off = obj.in_state(ObjectState::Off);
      if (open && closed) fail(path, "object '" + obj.id + "' is both OPEN and CLOSED");
      if (on && off) fail(path, "object '" + obj.id + "' is both ON and OFF");
      if ((open || closed) && !obj.has(ObjectProperty::CanOpen)) {
        fail(path, "object '" + obj.id + "' has OPEN/CLOSED state without CAN_OPEN");
      }
      if ((on || off) && !obj.has(ObjectProperty::HasSwitch)) {
        fail(path, "object '" + obj.id + "' has ON/OFF state without HAS_SWITCH");
      }
      // Openable and switchable objects always carry a definite state.
      if (obj.has(ObjectProperty::CanOpen) && !open && !closed) obj.states.insert(ObjectState::Closed);
      if (obj.has(ObjectProperty::HasSwitch) && !on && !off) obj.states.insert(ObjectState::Off);

      try {
        layout.graph.add_node(std::move(obj));
      } catch (const GraphError& e) {
        fail(path + ".id", e.what());
      }
    }
  }

  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) fail("$.edges", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& e = (*it)[i];
      const std::string path = "$.edges[" + std::to_string(i) + "]";
      Edge edge;
      edge.from = read_string(require(e, "from", path), path + ".from");
      edge.to = read_string(require(e, "to", path), path + ".to");
      const auto rel = read_string(require(e, "relation", path), path + ".relation");
      auto r = relation_from_string(rel);
      if (!r) fail(path + ".relation", "unknown relation '" + rel + "'");
      edge.relation = *r;
      try {
        layout.graph.add_edge(std::move(edge));
      } catch (const GraphError& err) {
        fail(path, err.what());
      }
    }
  }

  if (auto it = doc.find("doors"); it != doc.end()) {
    if (!it->is_array()) fail("$.doors", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& d = (*it)[i];
      const std::string path = "$.doors[" + std::to_string(i) + "]";
      const json& pair = require(d, "rooms", path);
      if (!pair.is_array() || pair.size() != 2) fail(path + ".rooms", "expected [room_a, room_b]");
      Door door;
      door.room_a = read_string(pair[0], path + ".rooms[0]");
      door.room_b = read_string(pair[1], path + ".rooms[1]");
      door.anchor = read_vec3(require(d, "anchor", path), path + ".anchor");
      const Room* a = layout.find_room(door.room_a);
      const Room* b = layout.find_room(door.room_b);
      if (!a) fail(path + ".rooms[0]", "unknown room '" + door.room_a + "'");
      if (!b) fail(path + ".rooms[1]", "unknown room '" + door.room_b + "'");
      if (a == b) fail(path + ".rooms", "door must join two distinct rooms");
      // Anchors sit on the shared wall: inside both footprints.
      Vec3 probe = door.anchor;
      for (const Room* r : {a, b}) {
        probe.y = r->bbox_min.y;
        if (!r->contains(probe, 1e-6)) {
          fail(path + ".anchor", "anchor is not on the boundary of '" + r->name + "'");
        }
      }
      layout.doors.push_back(std::move(door));
    }
  }
  return layout;
}

HomeLayout load_layout_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LayoutError(path + ": cannot open layout file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LayoutError(path + ": " + e.what());
  }
  try {
    return load_layout(doc);
  } catch (const LayoutError& e) {
    throw LayoutError(path + ": " + e.what());
  }
}

json to_json(const HomeLayout& layout) {
  json doc;
  doc["name"] = layout.name;
  doc["rooms"] = json::array();
  for (const auto& r : layout.rooms) {
    doc["rooms"].push_back(
        {{"name", r.name}, {"bbox_min", vec_json(r.bbox_min)}, {"bbox_max", vec_json(r.bbox_max)}});
  }
  doc["objects"] = json::array();
  for (const auto& o : layout.graph.nodes()) {
    json props = json::array();
    for (auto p : o.properties) props.push_back(std::string(to_string(p)));
    json states = json::array();
    for (auto s : o.states) states.push_back(std::string(to_string(s)));
    doc["objects"].push_back({{"id", o.id},
                              {"class", o.class_name},
                              {"room", o.room},
                              {"position", vec_json(o.position)},
                              {"properties", props},
                              {"states", states}});
  }
  doc["edges"] = json::array();
  for (const auto& e : layout.graph.edges()) {
    doc["edges"].push_back(
        {{"from", e.from}, {"relation", std::string(to_string(e.relation))}, {"to", e.to}});
  }
  doc["doors"] = json::array();
  for (const auto& d : layout.doors) {
    doc["doors"].push_back(
        {{"rooms", json::array({d.room_a, d.room_b})}, {"anchor", vec_json(d.anchor)}});
  }
  return doc;
}

}  // namespace ambisim::env
