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

#include "ambisim/env.hpp"

namespace ambisim::env {

namespace {

bool is_open_pair(ObjectState s) { return s == ObjectState::Open || s == ObjectState::Closed; }

}  // namespace

std::string_view to_string(ObjectProperty p) {
  switch (p) {
    case ObjectProperty::CanOpen: return "CAN_OPEN";
    case ObjectProperty::HasSwitch: return "HAS_SWITCH";
    case ObjectProperty::Grabbable: return "GRABBABLE";
    case ObjectProperty::Surface: return "SURFACE";
  }
  return "?";
}

std::string_view to_string(ObjectState s) {
  switch (s) {
    case ObjectState::Open: return "OPEN";
    case ObjectState::Closed: return "CLOSED";
    case ObjectState::On: return "ON";
    case ObjectState::Off: return "OFF";
  }
  return "?";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::On: return "ON";
    case Relation::Inside: return "INSIDE";
    case Relation::NextTo: return "NEXT_TO";
    case Relation::Holds: return "HOLDS";
  }
  return "?";
}

std::optional<ObjectProperty> property_from_string(std::string_view s) {
  for (auto p : {ObjectProperty::CanOpen, ObjectProperty::HasSwitch, ObjectProperty::Grabbable,
                 ObjectProperty::Surface}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::optional<ObjectState> state_from_string(std::string_view s) {
  for (auto st : {ObjectState::Open, ObjectState::Closed, ObjectState::On, ObjectState::Off}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<Relation> relation_from_string(std::string_view s) {
  for (auto r : {Relation::On, Relation::Inside, Relation::NextTo, Relation::Holds}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

ObjectState opposite(ObjectState s) {
  switch (s) {
    case ObjectState::Open: return ObjectState::Closed;
    case ObjectState::Closed: return ObjectState::Open;
    case ObjectState::On: return ObjectState::Off;
    case ObjectState::Off: return ObjectState::On;
  }
  return s;
}

void EnvironmentGraph::add_node(SceneObject object) {
  if (index_.count(object.id)) throw GraphError("duplicate object id '" + object.id + "'");
  index_.emplace(object.id, nodes_.size());
  nodes_.push_back(std::move(object));
}

void EnvironmentGraph::add_edge(Edge edge) {
  if (edge.from == edge.to) throw GraphError("self-edge on '" + edge.from + "'");
  if (!find(edge.from)) throw GraphError("edge source '" + edge.from + "' is not a node");
  if (!find(edge.to)) throw GraphError("edge target '" + edge.to + "' is not a node");
  edges_.push_back(std::move(edge));
}

std::size_t EnvironmentGraph::remove_edges(std::string_view from, Relation relation,
                                           std::string_view to) {
  const auto before = edges_.size();
  std::erase_if(edges_, [&](const Edge& e) {
    return e.relation == relation && (from.empty() || e.from == from) &&
           (to.empty() || e.to == to);
  });
  return before - edges_.size();
}

const SceneObject* EnvironmentGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

SceneObject* EnvironmentGraph::find(std::string_view id) {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

bool EnvironmentGraph::has_edge(std::string_view from, Relation relation,
                                std::string_view to) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return e.from == from && e.relation == relation && e.to == to;
  });
}

std::optional<StateTransition> apply_state_change(EnvironmentGraph& graph,
                                                  std::string_view object_id,
                                                  ObjectState new_state,
                                                  Timestamp timestamp) {
  SceneObject* object = graph.find(object_id);
  if (!object) throw GraphError("unknown object '" + std::string(object_id) + "'");
  const auto required =
      is_open_pair(new_state) ? ObjectProperty::CanOpen : ObjectProperty::HasSwitch;
  if (!object->has(required)) {
    throw GraphError("object '" + object->id + "' lacks " + std::string(to_string(required)) +
                     " required for state " + std::string(to_string(new_state)));
  }
  if (object->in_state(new_state)) return std::nullopt;

  const ObjectState previous = opposite(new_state);
  object->states.erase(previous);
  object->states.insert(new_state);
  return StateTransition{timestamp, object->id, object->class_name, object->room, previous,
                         new_state};
}

}  // namespace ambisim::env
