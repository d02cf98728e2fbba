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

// Home layouts: rooms, scene objects and the environment graph that the
// simulator mutates. A HomeLayout is immutable after load; each simulation
// run works on its own copy of the EnvironmentGraph.

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ambisim/common.hpp"

namespace ambisim::env {

/// Position in meters; y is vertical.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

struct Room {
  std::string name;
  Vec3 bbox_min;
  Vec3 bbox_max;

  friend bool operator==(const Room&, const Room&) = default;

  bool contains(const Vec3& p, double tol = 1e-9) const;
  /// Center of the floor footprint at height y.
  Vec3 floor_centroid(double y) const;
};

/// x-z footprint area of the bounding box.
double room_area(const Room& room);

enum class ObjectProperty { CanOpen, HasSwitch, Grabbable, Surface };
enum class ObjectState { Open, Closed, On, Off };
enum class Relation { On, Inside, NextTo, Holds };

std::string_view to_string(ObjectProperty p);
std::string_view to_string(ObjectState s);
std::string_view to_string(Relation r);
std::optional<ObjectProperty> property_from_string(std::string_view s);
std::optional<ObjectState> state_from_string(std::string_view s);
std::optional<Relation> relation_from_string(std::string_view s);

struct SceneObject {
  std::string id;
  std::string class_name;
  std::string room;
  Vec3 position;
  std::set<ObjectProperty> properties;
  std::set<ObjectState> states;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;

  bool has(ObjectProperty p) const { return properties.count(p) != 0; }
  bool in_state(ObjectState s) const { return states.count(s) != 0; }
};

struct Edge {
  std::string from;
  Relation relation = Relation::On;
  std::string to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objects in declaration order plus directed relation edges.
class EnvironmentGraph {
 public:
  void add_node(SceneObject object);
  void add_edge(Edge edge);
  /// Removes every edge matching (from, relation) or (relation, to) when the
  /// other endpoint is empty.
  std::size_t remove_edges(std::string_view from, Relation relation, std::string_view to);

  const SceneObject* find(std::string_view id) const;
  SceneObject* find(std::string_view id);
  bool has_edge(std::string_view from, Relation relation, std::string_view to) const;

  const std::vector<SceneObject>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const EnvironmentGraph& a, const EnvironmentGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<SceneObject> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
};

struct Door {
  std::string room_a;
  std::string room_b;
  Vec3 anchor;

  friend bool operator==(const Door&, const Door&) = default;
};

struct HomeLayout {
  std::string name;
  std::vector<Room> rooms;
  EnvironmentGraph graph;
  std::vector<Door> doors;

  friend bool operator==(const HomeLayout&, const HomeLayout&) = default;

  const Room* find_room(std::string_view name) const;
  std::optional<std::size_t> room_index(std::string_view name) const;
  /// Height shared by every room's y-range; the agent walks at this level.
  double floor_height() const;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a layout document. Errors name the offending field
/// path or entity.
HomeLayout load_layout(const nlohmann::json& document);
HomeLayout load_layout_file(const std::string& path);
nlohmann::json to_json(const HomeLayout& layout);

const std::vector<Room>& find_all_rooms(const HomeLayout& layout);

struct StateTransition {
  Timestamp timestamp;
  std::string object_id;
  std::string object_class;
  std::string room;
  ObjectState from_state = ObjectState::Closed;
  ObjectState to_state = ObjectState::Open;

  friend bool operator==(const StateTransition&, const StateTransition&) = default;
};

/// Sets `new_state` on the object, replacing the opposite state of the same
/// pair. Returns the transition when the state changed, nullopt on a no-op.
/// Throws GraphError for unknown objects or states the properties forbid.
std::optional<StateTransition> apply_state_change(EnvironmentGraph& graph,
                                                  std::string_view object_id,
                                                  ObjectState new_state,
                                                  Timestamp timestamp);

ObjectState opposite(ObjectState s);

}  // namespace ambisim::env
