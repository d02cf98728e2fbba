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
#include <cmath>

#include "ambisim/sim.hpp"

namespace ambisim::sim {

using env::Vec3;
using script::ActionVerb;

namespace {

constexpr double kStandOff = 0.5;  // meters in front of a target object

struct Segment {
  std::int64_t t0;
  std::int64_t t1;
  Vec3 p0;
  Vec3 p1;
};

struct Target {
  Vec3 position;
  std::string room;
};

Vec3 clamp_to(const env::Room& room, Vec3 p) {
  p.x = std::clamp(p.x, room.bbox_min.x, room.bbox_max.x);
  p.z = std::clamp(p.z, room.bbox_min.z, room.bbox_max.z);
  return p;
}

std::string unique_agent_id(const env::EnvironmentGraph& graph) {
  std::string id(kAgentId);
  for (int k = 1; graph.find(id); ++k) id = std::string(kAgentId) + "_" + std::to_string(k);
  return id;
}

class Runner {
 public:
  Runner(const script::Script& script, const env::HomeLayout& layout, const SimParams& params)
      : script_(script), layout_(layout), params_(params), graph_(layout.graph) {
    floor_y_ = layout.floor_height();
  }

  SimResult run() {
    if (script_.empty()) throw SimError("cannot simulate an empty script");
    for (std::size_t i = 0; i < script_.size(); ++i) {
      if (!layout_.find_room(script_.steps()[i].room)) {
        throw SimError("step " + std::to_string(i + 1) + " names unknown room '" +
                       script_.steps()[i].room + "'");
      }
    }

    const Timestamp day_zero = midnight(params_.epoch_date);
    windows_ = schedule_steps(script_, day_zero);

    const auto& first_room = *layout_.find_room(script_.steps().front().room);
    room_ = first_room.name;
    pos_ = first_room.floor_centroid(floor_y_);
    start_ = pos_;

    agent_id_ = unique_agent_id(graph_);
    graph_.add_node(env::SceneObject{agent_id_, std::string(kAgentId), room_, pos_, {}, {}});

    const double walk = script_.metadata.walk_speed.value_or(params_.walk_speed);
    const double run = std::max(params_.run_speed, walk);

    for (std::size_t i = 0; i < script_.size(); ++i) {
      const auto& step = script_.steps()[i];
      const auto ws = windows_[i].start.micros;
      const auto we = windows_[i].end.micros;
      switch (step.verb) {
        case ActionVerb::Walk:
        case ActionVerb::Run: {
          const auto target = resolve_target(i, step);
          travel(i, plan_path(layout_, pos_, target.position, room_, target.room), target.room, ws,
                 we, step.verb == ActionVerb::Run ? run : walk);
          break;
        }
        case ActionVerb::WalkForward: {
          const Vec3 h = heading_.value_or(Vec3{1.0, 0.0, 0.0});
          const Vec3 dest = clamp_to(*layout_.find_room(room_), pos_ + h * 1.0);
          travel(i, {pos_, dest}, room_, ws, we, walk, /*keep_heading=*/true);
          break;
        }
        case ActionVerb::TurnLeft:
        case ActionVerb::TurnRight: {
          const Vec3 h = heading_.value_or(Vec3{1.0, 0.0, 0.0});
          // Left is counter-clockwise seen from above (+y).
          heading_ = step.verb == ActionVerb::TurnLeft ? Vec3{h.z, 0.0, -h.x} : Vec3{-h.z, 0.0, h.x};
          break;
        }
        case ActionVerb::Open: change_state(i, step, env::ObjectState::Open, ws); break;
        case ActionVerb::Close: change_state(i, step, env::ObjectState::Closed, ws); break;
        case ActionVerb::SwitchOn: change_state(i, step, env::ObjectState::On, ws); break;
        case ActionVerb::SwitchOff: change_state(i, step, env::ObjectState::Off, ws); break;
        case ActionVerb::Grab: grab(i, step); break;
        case ActionVerb::Put: put(i, step); break;
        case ActionVerb::Sit:
        case ActionVerb::StandUp:
        case ActionVerb::Drink:
        case ActionVerb::Touch:
        case ActionVerb::LookAt: break;
      }
    }

    SimResult result;
    result.trajectory.steps = windows_;
    sample(result.trajectory);
    result.transitions = std::move(transitions_);
    result.issues = std::move(issues_);
    result.final_graph = std::move(graph_);
    return result;
  }

 private:
  void issue(std::size_t i, Severity severity, std::string message) {
    issues_.push_back({i, severity, std::move(message)});
  }

  const env::SceneObject* find_object(std::string_view cls, std::string_view room) const {
    const env::SceneObject* fallback = nullptr;
    for (const auto& o : graph_.nodes()) {
      if (o.class_name != cls || o.id == agent_id_) continue;
      if (o.room == room) return &o;
      if (!fallback) fallback = &o;
    }
    return fallback;
  }

  Target resolve_target(std::size_t i, const script::ActionStep& step) {
    const auto& token = step.objects.front();
    if (const auto* room = layout_.find_room(token)) {
      return {room->floor_centroid(floor_y_), room->name};
    }
    const auto* obj = find_object(token, step.room);
    const auto& step_room = *layout_.find_room(step.room);
    if (!obj) {
      issue(i, Severity::Error, "unknown object '" + token + "'; walking to room centroid");
      return {step_room.floor_centroid(floor_y_), step_room.name};
    }
    const auto& room = *layout_.find_room(obj->room);
    const Vec3 c = room.floor_centroid(floor_y_);
    const Vec3 p{obj->position.x, floor_y_, obj->position.z};
    const Vec3 d = c - p;
    const double len = env::norm(d);
    if (len <= kStandOff) return {c, room.name};
    return {p + d * (kStandOff / len), room.name};
  }

  std::string locate_room(const Vec3& p, const std::string& preferred) const {
    if (const auto* r = layout_.find_room(preferred); r && r->contains(p, 1e-9)) return preferred;
    for (const auto& r : layout_.rooms) {
      if (r.contains(p, 1e-9)) return r.name;
    }
    return preferred;
  }

  void travel(std::size_t i, const std::vector<Vec3>& path, const std::string& dest_room,
              std::int64_t ws, std::int64_t we, double speed, bool keep_heading = false) {
    std::int64_t t = ws;
    const std::int64_t budget_end = we;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Vec3 a = path[k], b = path[k + 1];
      const double len = env::distance(a, b);
      if (len == 0.0) continue;
      if (!keep_heading) {
        const double hn = std::hypot(b.x - a.x, b.z - a.z);
        if (hn > 0) heading_ = Vec3{(b.x - a.x) / hn, 0.0, (b.z - a.z) / hn};
      }
      // Round up so the realized speed never exceeds `speed`.
      const auto duration = static_cast<std::int64_t>(std::ceil(len / speed * 1e6));
      if (t + duration <= budget_end) {
        segments_.push_back({t, t + duration, a, b});
        t += duration;
        pos_ = b;
        continue;
      }
      const std::int64_t left = budget_end - t;
      const Vec3 stop = a + (b - a) * (static_cast<double>(left) / static_cast<double>(duration));
      if (left > 0) segments_.push_back({t, budget_end, a, stop});
      pos_ = stop;
      room_ = locate_room(pos_, room_);
      issue(i, Severity::Warning,
            "travel exceeds the step window; stopped short of the target");
      return;
    }
    room_ = dest_room;
  }

  void change_state(std::size_t i, const script::ActionStep& step, env::ObjectState state,
                    std::int64_t ws) {
    const auto* obj = find_object(step.objects.front(), step.room);
    if (!obj) {
      issue(i, Severity::Error, "unknown object '" + step.objects.front() + "'");
      return;
    }
    try {
      if (auto tr = env::apply_state_change(graph_, obj->id, state, Timestamp{ws})) {
        transitions_.push_back({std::move(*tr), i});
      }
    } catch (const env::GraphError& e) {
      issue(i, Severity::Error, e.what());
    }
  }

  void grab(std::size_t i, const script::ActionStep& step) {
    const auto* obj = find_object(step.objects.front(), step.room);
    if (!obj) {
      issue(i, Severity::Error, "unknown object '" + step.objects.front() + "'");
      return;
    }
    const std::string id = obj->id;
    if (graph_.has_edge(agent_id_, env::Relation::Holds, id)) return;
    graph_.remove_edges(id, env::Relation::On, "");
    graph_.remove_edges(id, env::Relation::Inside, "");
    graph_.add_edge({agent_id_, env::Relation::Holds, id});
  }

  void put(std::size_t i, const script::ActionStep& step) {
    const auto* held = find_object(step.objects[0], step.room);
    const auto* dest = find_object(step.objects[1], step.room);
    if (!held || !dest) {
      issue(i, Severity::Error,
            "unknown object '" + (!held ? step.objects[0] : step.objects[1]) + "'");
      return;
    }
    const std::string held_id = held->id, dest_id = dest->id;
    if (!graph_.has_edge(agent_id_, env::Relation::Holds, held_id)) {
      issue(i, Severity::Error, "put of '" + held_id + "' which the agent does not hold");
      return;
    }
    graph_.remove_edges(agent_id_, env::Relation::Holds, held_id);
    if (held_id != dest_id) graph_.add_edge({held_id, env::Relation::On, dest_id});
  }

  void sample(Trajectory& out) const {
    const std::int64_t dt = params_.dt_micros();
    const std::int64_t t0 = windows_.front().start.micros;
    const std::int64_t t_end = windows_.back().end.micros;
    const std::int64_t count = (t_end - t0) / dt + 1;
    out.samples.resize(static_cast<std::size_t>(count));

    std::size_t seg = 0, step = 0;
    Vec3 rest = start_;
    for (std::int64_t k = 0; k < count; ++k) {
      const std::int64_t t = t0 + k * dt;
      while (seg < segments_.size() && segments_[seg].t1 <= t) rest = segments_[seg++].p1;
      Vec3 p = rest;
      if (seg < segments_.size() && segments_[seg].t0 <= t) {
        const auto& s = segments_[seg];
        const double f = static_cast<double>(t - s.t0) / static_cast<double>(s.t1 - s.t0);
        p = s.p0 + (s.p1 - s.p0) * f;
      }
      while (step + 1 < windows_.size() && windows_[step + 1].start.micros <= t) ++step;
      out.samples[static_cast<std::size_t>(k)] = {Timestamp{t}, p, static_cast<std::int32_t>(step)};
    }
  }

  const script::Script& script_;
  const env::HomeLayout& layout_;
  const SimParams& params_;
  env::EnvironmentGraph graph_;
  std::string agent_id_;
  double floor_y_ = 0.0;
  std::vector<StepWindow> windows_;
  std::vector<Segment> segments_;
  StateTransitionLog transitions_;
  std::vector<StepIssue> issues_;
  Vec3 pos_;
  Vec3 start_;
  std::string room_;
  std::optional<Vec3> heading_;
};

}  // namespace

void SimParams::validate() const {
  if (!(dt > 0.0)) throw SimError("dt must be > 0");
  if (dt_micros() <= 0) throw SimError("dt must be at least one microsecond");
  if (!(walk_speed > 0.0) || !(run_speed > 0.0)) throw SimError("speeds must be > 0");
  if (run_speed < walk_speed) throw SimError("run_speed must be >= walk_speed");
  if (!(jitter_eps >= 0.0)) throw SimError("jitter_eps must be >= 0");
  if (!epoch_date.ok()) throw SimError("epoch_date is not a valid date");
}

std::int64_t SimParams::dt_micros() const { return std::llround(dt * 1e6); }

std::vector<StepWindow> schedule_steps(const script::Script& script, Timestamp day_zero) {
  const std::size_t n = script.size();
  std::vector<StepWindow> windows(n);
  std::vector<std::int64_t> group_base(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && script.absolute_start(j) == script.absolute_start(i)) ++j;
    const std::int64_t base = day_zero.micros + script.absolute_start(i) * kMicrosPerMinute;
    const std::int64_t slice = kMicrosPerMinute / static_cast<std::int64_t>(j - i);
    for (std::size_t k = i; k < j; ++k) {
      windows[k].start = Timestamp{base + static_cast<std::int64_t>(k - i) * slice};
      group_base[k] = base;
    }
    i = j;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) windows[i].end = windows[i + 1].start;
  if (n > 0) {
    const std::size_t last = n - 1;
    windows[last].end =
        script.absolute_end(last) > script.absolute_start(last)
            ? Timestamp{day_zero.micros + script.absolute_end(last) * kMicrosPerMinute}
            : Timestamp{group_base[last] + kMicrosPerMinute};
  }
  return windows;
}

SimResult simulate(const script::Script& script, const env::HomeLayout& layout,
                   const SimParams& params) {
  params.validate();
  return Runner(script, layout, params).run();
}

}  // namespace ambisim::sim
