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

#include <doctest.h>

#include <algorithm>
#include <string>

#include "ambisim/pipeline.hpp"
#include "ambisim/sim.hpp"
#include "test_support.hpp"

using namespace ambisim;
using namespace ambisim::sim;
using ambisim::testing::data_path;
using ambisim::testing::parse_clean;
using ambisim::testing::room_json;
using env::Vec3;
using nlohmann::json;

namespace {

script::Script breakfast() {
  return parse_clean(pipeline::read_text_file(data_path("scripts/breakfast_block.txt")));
}

env::HomeLayout chain_layout(bool with_doors) {
  json doc{{"name", "chain"},
           {"rooms", json::array({room_json("a", {0, 0, 0}, {4, 3, 4}),
                                  room_json("b", {4, 0, 0}, {8, 3, 4}),
                                  room_json("c", {8, 0, 0}, {12, 3, 4})})}};
  if (with_doors) {
    doc["doors"] = json::array({{{"rooms", {"a", "b"}}, {"anchor", {4, 0, 1}}},
                                {{"rooms", {"b", "c"}}, {"anchor", {8, 0, 3}}}});
  }
  return env::load_layout(doc);
}

bool inside_some_room(const env::HomeLayout& layout, const Vec3& p) {
  return std::any_of(layout.rooms.begin(), layout.rooms.end(),
                     [&](const env::Room& r) { return r.contains(p, 1e-9); });
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("plan_path degenerate and same-room cases") {
    const auto layout = ambisim::testing::home_a();
    const Vec3 p{1, 0, 1};
    CHECK(plan_path(layout, p, p, "bedroom", "bedroom") == std::vector<Vec3>{p});
    const Vec3 q{2, 0, 3};
    CHECK(plan_path(layout, p, q, "bedroom", "bedroom") == std::vector<Vec3>{p, q});
    CHECK_THROWS_AS(plan_path(layout, p, q, "bedroom", "garage"), SimError);
  }

  TEST_CASE("plan_path crosses the declared door anchor") {
    const auto layout = ambisim::testing::home_a();
    const Vec3 from{1, 0, 1}, to{10, 0, 3};
    const auto path = plan_path(layout, from, to, "bedroom", "kitchen");
    CHECK(path == std::vector<Vec3>{from, Vec3{5, 0, 2}, to});
  }

  TEST_CASE("plan_path through a three-room chain without doors passes the middle centroid") {
    const auto layout = chain_layout(false);
    const Vec3 from{1, 0, 1}, to{11, 0, 3};
    const auto path = plan_path(layout, from, to, "a", "c");
    const Vec3 centroid_b = layout.rooms[1].floor_centroid(0);
    CHECK(std::find(path.begin(), path.end(), centroid_b) != path.end());
    CHECK(path.front() == from);
    CHECK(path.back() == to);
    CHECK(path.size() == 5);
  }

  TEST_CASE("plan_path with doors follows the anchors") {
    const auto layout = chain_layout(true);
    const auto path = plan_path(layout, {1, 0, 1}, {11, 0, 3}, "a", "c");
    CHECK(path == std::vector<Vec3>{{1, 0, 1}, {4, 0, 1}, {8, 0, 3}, {11, 0, 3}});
  }

  TEST_CASE("disconnected rooms are an error") {
    const auto layout = env::load_layout(
        {{"name", "split"},
         {"rooms", json::array({room_json("a", {0, 0, 0}, {4, 3, 4}),
                                room_json("b", {10, 0, 0}, {14, 3, 4})})}});
    CHECK_THROWS_AS(plan_path(layout, {1, 0, 1}, {11, 0, 1}, "a", "b"), SimError);
  }

  TEST_CASE("steps sharing a minute split it in listed order") {
    const auto s = parse_clean(
        "[walk] <kitchen> (07:10 - 07:10) (kitchen)\n"
        "[switchon] <coffeemaker> (07:10 - 07:10) (kitchen)\n"
        "[standup] (07:10 - 07:11) (kitchen)\n"
        "[grab] <waterglass> (07:11 - 07:14) (kitchen)\n");
    const Timestamp zero{0};
    const auto w = schedule_steps(s, zero);
    REQUIRE(w.size() == 4);
    CHECK(w[0].start.micros == 430 * kMicrosPerMinute);
    CHECK(w[1].start.micros == 430 * kMicrosPerMinute + 20 * kMicrosPerSecond);
    CHECK(w[2].start.micros == 430 * kMicrosPerMinute + 40 * kMicrosPerSecond);
    CHECK(w[2].end == w[3].start);
    CHECK(w[3].end.micros == 434 * kMicrosPerMinute);
  }

  TEST_CASE("stationary one-minute step yields 301 samples at the centroid") {
    const auto layout = ambisim::testing::home_a();
    const auto s = parse_clean("[walk] <kitchen> (08:00 - 08:01) (kitchen)\n");
    const auto r = simulate(s, layout, SimParams{});
    REQUIRE(r.trajectory.samples.size() == 301);
    const Vec3 c = layout.find_room("kitchen")->floor_centroid(layout.floor_height());
    for (const auto& smp : r.trajectory.samples) CHECK(smp.position == c);
    CHECK(r.transitions.empty());
    CHECK(r.issues.empty());
    const auto day0 = midnight(SimParams{}.epoch_date);
    CHECK(r.trajectory.start().micros == day0.micros + 480 * kMicrosPerMinute);
    CHECK(r.trajectory.end().micros == day0.micros + 481 * kMicrosPerMinute);
  }

  TEST_CASE("opening the fridge logs one transition at the step start") {
    const auto layout = ambisim::testing::home_a();
    const auto s = parse_clean("[open] <fridge> (08:00 - 08:00) (kitchen)\n");
    const auto r = simulate(s, layout, SimParams{});
    REQUIRE(r.transitions.size() == 1);
    const auto& t = r.transitions[0].transition;
    CHECK(t.object_id == "fridge_1");
    CHECK(t.from_state == env::ObjectState::Closed);
    CHECK(t.to_state == env::ObjectState::Open);
    CHECK(format_timestamp(t.timestamp) == "2024-01-01 08:00:00.000000");
    CHECK(r.final_graph.find("fridge_1")->in_state(env::ObjectState::Open));
  }

  TEST_CASE("breakfast block: span, samples and transitions") {
    const auto layout = ambisim::testing::home_a();
    const SimParams params;
    const auto r = simulate(breakfast(), layout, params);
    const auto& samples = r.trajectory.samples;
    CHECK(r.trajectory.end().micros - r.trajectory.start().micros == 1200 * kMicrosPerSecond);
    CHECK(samples.size() == 6001);

    std::vector<std::pair<std::string, env::ObjectState>> seen;
    for (const auto& t : r.transitions) seen.emplace_back(t.transition.object_id, t.transition.to_state);
    const std::vector<std::pair<std::string, env::ObjectState>> expected{
        {"coffeemaker_1", env::ObjectState::On},
        {"fridge_1", env::ObjectState::Open},
        {"fridge_1", env::ObjectState::Closed},
        {"toaster_1", env::ObjectState::On}};
    CHECK(seen == expected);
    for (const auto& i : r.issues) CHECK_MESSAGE(i.severity != Severity::Error, i.message);

    SUBCASE("time grid is exact and speeds are bounded") {
      const auto dt = params.dt_micros();
      for (std::size_t k = 0; k < samples.size(); ++k) {
        CHECK(samples[k].t.micros - samples[0].t.micros == static_cast<std::int64_t>(k) * dt);
        CHECK(inside_some_room(layout, samples[k].position));
        if (k > 0) {
          const double d = env::distance(samples[k].position, samples[k - 1].position);
          CHECK(d <= params.run_speed * params.dt + 1e-9);
        }
      }
    }
    SUBCASE("step indices are non-decreasing and end on the last step") {
      for (std::size_t k = 1; k < samples.size(); ++k) {
        CHECK(samples[k].step_index >= samples[k - 1].step_index);
      }
      CHECK(samples.back().step_index == 22);
    }
    SUBCASE("grabbed and put objects move in the graph") {
      CHECK(r.final_graph.has_edge("bananas_1", env::Relation::On, "kitchencounter_1"));
      CHECK_FALSE(r.final_graph.has_edge("bananas_1", env::Relation::Inside, "fridge_1"));
      CHECK(r.final_graph.has_edge(std::string(kAgentId), env::Relation::Holds, "coffeepot_1"));
    }
  }

  TEST_CASE("simulation is deterministic") {
    const auto layout = ambisim::testing::home_a();
    const auto a = simulate(breakfast(), layout, SimParams{});
    const auto b = simulate(breakfast(), layout, SimParams{});
    REQUIRE(a.trajectory.samples.size() == b.trajectory.samples.size());
    for (std::size_t k = 0; k < a.trajectory.samples.size(); ++k) {
      REQUIRE(a.trajectory.samples[k].position == b.trajectory.samples[k].position);
    }
    CHECK(a.final_graph == b.final_graph);
  }

  TEST_CASE("walking between rooms reaches the target through the door") {
    const auto layout = ambisim::testing::home_a();
    const auto s = parse_clean(
        "[walk] <bed> (06:00 - 06:01) (bedroom)\n"
        "[walk] <toaster> (06:01 - 06:02) (kitchen)\n");
    const SimParams params;
    const auto r = simulate(s, layout, params);
    CHECK(r.issues.empty());
    bool crossed_door = false;
    for (const auto& smp : r.trajectory.samples) {
      crossed_door |= std::abs(smp.position.x - 5.0) < 0.2 && std::abs(smp.position.z - 2.0) < 0.2;
    }
    CHECK(crossed_door);
    const auto* toaster = layout.graph.find("toaster_1");
    const auto last = r.trajectory.samples.back().position;
    CHECK(std::hypot(last.x - toaster->position.x, last.z - toaster->position.z) ==
          doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("travel longer than its window stops short with a warning") {
    const auto layout = chain_layout(true);
    auto s = parse_clean(
        "---\nwalk_speed: 0.05\n---\n"
        "[walk] <a> (06:00 - 06:00) (a)\n"
        "[walk] <c> (06:01 - 06:02) (c)\n");
    const auto r = simulate(s, layout, SimParams{});
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].severity == Severity::Warning);
    CHECK(r.trajectory.samples.back().position.x < 8.0);
  }

  TEST_CASE("object problems become issues, unknown rooms are fatal") {
    const auto layout = ambisim::testing::home_a();
    const auto bad_objects = parse_clean(
        "[open] <spaceship> (08:00 - 08:00) (kitchen)\n"
        "[switchon] <toothbrush> (08:01 - 08:01) (bathroom)\n"
        "[put] <bananas> <kitchencounter> (08:02 - 08:02) (kitchen)\n");
    const auto r = simulate(bad_objects, layout, SimParams{});
    CHECK(r.issues.size() == 3);
    CHECK(r.transitions.empty());

    const auto garage = parse_clean("[walk] <car> (08:00 - 08:01) (garage)\n");
    CHECK_THROWS_AS(simulate(garage, layout, SimParams{}), SimError);
    CHECK_THROWS_AS(simulate(script::Script{}, layout, SimParams{}), SimError);
  }

  TEST_CASE("parameter validation") {
    SimParams p;
    p.dt = 0;
    CHECK_THROWS_AS(p.validate(), SimError);
    p = SimParams{};
    p.run_speed = 1.0;
    CHECK_THROWS_AS(p.validate(), SimError);
    p = SimParams{};
    p.jitter_eps = -1;
    CHECK_THROWS_AS(p.validate(), SimError);
  }
}
