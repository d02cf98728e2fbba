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

#include <random>
#include <set>
#include <string>

#include "ambisim/pipeline.hpp"
#include "ambisim/sensors.hpp"
#include "test_support.hpp"

using namespace ambisim;
using namespace ambisim::sensors;
using ambisim::testing::data_path;
using ambisim::testing::room_json;
using env::Vec3;
using nlohmann::json;

namespace {

sim::Trajectory line_trajectory(Vec3 from, Vec3 velocity, std::size_t n, double dt = 0.2) {
  sim::Trajectory tr;
  for (std::size_t k = 0; k < n; ++k) {
    tr.samples.push_back({Timestamp{static_cast<std::int64_t>(k) * std::llround(dt * 1e6)},
                          from + velocity * (dt * static_cast<double>(k)), 0});
  }
  return tr;
}

SensorSuite single_sensor(Vec3 at, double radius = 5.0) {
  SensorSuite suite;
  suite.motion.push_back({"M001", "hall", at, radius});
  return suite;
}

sim::LoggedTransition logged(std::string id, env::ObjectState from, env::ObjectState to,
                             std::int64_t t = 0) {
  return {{Timestamp{t}, std::move(id), "thing", "kitchen", from, to}, 0};
}

}  // namespace

TEST_SUITE("sensors") {
  TEST_CASE("sensor count thresholds") {
    CHECK(determine_sensor_count(1) == 1);
    CHECK(determine_sensor_count(30.0) == 1);
    CHECK(determine_sensor_count(30.01) == 2);
    CHECK(determine_sensor_count(45.0) == 2);
    CHECK(determine_sensor_count(60.0) == 2);
    CHECK(determine_sensor_count(60.0001) == 3);
    CHECK(determine_sensor_count(120) == 3);
    CHECK_THROWS_AS(determine_sensor_count(0), SensorError);
  }

  TEST_CASE("count is a monotone step function of area") {
    int prev = 1;
    for (double a = 0.5; a < 200; a += 0.25) {
      const int c = determine_sensor_count(a);
      CHECK(c >= prev);
      prev = c;
    }
  }

  TEST_CASE("corner positions follow the fixed order") {
    const env::Room room{"bedroom", {0, 0, 0}, {5, 3, 4}};
    const auto one = calculate_sensor_positions(room, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].x == doctest::Approx(0.3));
    CHECK(one[0].y == doctest::Approx(2.7));
    CHECK(one[0].z == doctest::Approx(0.3));
    const auto two = calculate_sensor_positions(room, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[1].x == doctest::Approx(4.7));
    CHECK(two[1].y == doctest::Approx(2.7));
    CHECK(two[1].z == doctest::Approx(3.7));
    const auto three = calculate_sensor_positions(room, 3);
    CHECK(three[2].x == doctest::Approx(0.3));
    CHECK(three[2].z == doctest::Approx(3.7));
    CHECK_THROWS_AS(calculate_sensor_positions(env::Room{"closet", {0, 0, 0}, {0.5, 3, 4}}, 1),
                    SensorError);
    CHECK_THROWS_AS(calculate_sensor_positions(room, 4), SensorError);
  }

  TEST_CASE("home_a is instrumented with four motion sensors") {
    const auto layout = ambisim::testing::home_a();
    const auto suite = instrument(layout);
    REQUIRE(suite.motion.size() == 4);
    CHECK(suite.motion[0].room == "bedroom");
    CHECK(suite.motion[1].room == "kitchen");
    CHECK(suite.motion[2].room == "kitchen");
    CHECK(suite.motion[3].room == "bathroom");
    CHECK(suite.motion[0].id == "M001");
    CHECK(suite.motion[3].id == "M004");

    std::size_t can_open = 0, has_switch = 0;
    for (const auto& o : layout.graph.nodes()) {
      can_open += o.has(env::ObjectProperty::CanOpen);
      has_switch += o.has(env::ObjectProperty::HasSwitch);
    }
    CHECK(suite.doors.size() == can_open);
    CHECK(suite.devices.size() == has_switch);
    std::set<std::string> ids;
    for (const auto& d : suite.doors) ids.insert(d.id);
    for (const auto& d : suite.devices) ids.insert(d.id);
    CHECK(ids.size() == can_open + has_switch);
    CHECK(suite.door_for("fridge_1") != nullptr);
    CHECK(suite.device_for("toaster_1") != nullptr);
    CHECK(suite.door_for("toaster_1") == nullptr);
  }

  TEST_CASE("layout without openable objects has no door sensors; equal rooms get distinct ids") {
    const auto layout = env::load_layout(
        {{"name", "twins"},
         {"rooms", json::array({room_json("a", {0, 0, 0}, {4, 3, 4}),
                                room_json("b", {4, 0, 0}, {8, 3, 4})})}});
    const auto suite = instrument(layout);
    CHECK(suite.doors.empty());
    REQUIRE(suite.motion.size() == 2);
    CHECK(suite.motion[0].id != suite.motion[1].id);
    CHECK(instrument(layout) == suite);
  }

  TEST_CASE("sensor map round-trips") {
    const auto suite = instrument(ambisim::testing::home_a(), 4.5);
    const auto doc = sensor_map_json(suite);
    CHECK(sensor_suite_from_json(doc) == suite);
  }

  TEST_CASE("detection is inclusive at the radius") {
    const auto suite = single_sensor({0, 0, 0}, 5.0);
    sim::Trajectory tr;
    tr.samples.push_back({Timestamp{0}, {0, 0, 0}, 0});
    tr.samples.push_back({Timestamp{200000}, {3, 0, 4}, 0});
    tr.samples.push_back({Timestamp{400000}, {6, 0, 0}, 0});
    const auto hits = detect_motion(tr, suite);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].sample_index == 0);
    CHECK(hits[1].sample_index == 1);
  }

  TEST_CASE("a stationary agent never triggers") {
    const auto tr = line_trajectory({1, 0, 1}, {0, 0, 0}, 500);
    CHECK(motion_triggers(tr, single_sensor({1, 2, 1}), sim::SimParams{}).empty());
  }

  TEST_CASE("walking through one disk yields one ON then one OFF") {
    const auto tr = line_trajectory({-10, 0, 0}, {1.2, 0, 0}, 150);
    const auto suite = single_sensor({0, 0, 0}, 3.0);
    const auto events = motion_triggers(tr, suite, sim::SimParams{});
    REQUIRE(events.size() == 2);
    CHECK(events[0].value == SensorValue::On);
    CHECK(events[1].value == SensorValue::Off);
    CHECK(events[0].timestamp < events[1].timestamp);
    CHECK(events == ambisim::testing::motion_oracle(tr, suite, 0.1));
  }

  TEST_CASE("crossing two overlapping disks gives balanced per-sensor pairs") {
    const auto tr = line_trajectory({-10, 0, 0}, {1.2, 0, 0}, 200);
    SensorSuite suite;
    suite.motion.push_back({"M001", "a", {0, 0, 0}, 3.0});
    suite.motion.push_back({"M002", "a", {2, 0, 0}, 3.0});
    const auto events = motion_triggers(tr, suite, sim::SimParams{});
    CHECK(events == ambisim::testing::motion_oracle(tr, suite, 0.1));
    for (const char* id : {"M001", "M002"}) {
      int on = 0, off = 0;
      for (const auto& e : events) {
        if (e.sensor_id != id) continue;
        (e.value == SensorValue::On ? on : off)++;
      }
      CHECK(on == 1);
      CHECK(off == 1);
    }
  }

  TEST_CASE("a run reaching the end of the trajectory has no trailing OFF") {
    const auto tr = line_trajectory({-2, 0, 0}, {1.2, 0, 0}, 10);
    const auto events = motion_triggers(tr, single_sensor({0, 0, 0}), sim::SimParams{});
    REQUIRE(events.size() == 1);
    CHECK(events[0].value == SensorValue::On);
    CHECK(events[0].timestamp.micros == 200000);
  }

  TEST_CASE("run-length triggers match the brute-force oracle on random walks") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
      const auto tr = ambisim::testing::random_trajectory(rng, 1 + rng() % 2000);
      const auto suite = ambisim::testing::random_suite(rng);
      REQUIRE(motion_triggers(tr, suite, sim::SimParams{}) ==
              ambisim::testing::motion_oracle(tr, suite, 0.1));
    }
  }

  TEST_CASE("door and device events mirror qualifying transitions") {
    const auto suite = instrument(ambisim::testing::home_a());
    using S = env::ObjectState;
    const sim::StateTransitionLog log{
        logged("fridge_1", S::Closed, S::Open, 1), logged("fridge_1", S::Open, S::Closed, 2),
        logged("toaster_1", S::Off, S::On, 3), logged("toaster_1", S::On, S::Off, 4),
        logged("bed_1", S::Off, S::On, 5)};
    const auto events = door_device_events(log, suite);
    REQUIRE(events.size() == 4);
    CHECK(events[0].kind == SensorKind::Door);
    CHECK(events[0].value == SensorValue::Open);
    CHECK(events[0].sensor_id == suite.door_for("fridge_1")->id);
    CHECK(events[0].room == "kitchen");
    CHECK(events[1].value == SensorValue::Close);
    CHECK(events[2].kind == SensorKind::Device);
    CHECK(events[2].value == SensorValue::On);
    CHECK(events[3].value == SensorValue::Off);

    const auto forward_only = door_device_events(log, suite, /*emit_reverse=*/false);
    REQUIRE(forward_only.size() == 2);
    CHECK(forward_only[0].value == SensorValue::Open);
    CHECK(forward_only[1].value == SensorValue::On);
  }

  TEST_CASE("merge orders by time, then door/device/motion, then id") {
    CHECK(merge_events({{}, {}}).empty());
    const SensorEvent motion{Timestamp{5}, "M001", SensorKind::Motion, SensorValue::On, "k", {}};
    const SensorEvent door{Timestamp{5}, "D002", SensorKind::Door, SensorValue::Open, "k", "fridge"};
    const SensorEvent device{Timestamp{5}, "D001", SensorKind::Device, SensorValue::On, "k", "tv"};
    const SensorEvent early{Timestamp{1}, "M009", SensorKind::Motion, SensorValue::Off, "k", {}};
    const auto merged = merge_events({{motion}, {device, door}, {early}});
    REQUIRE(merged.size() == 4);
    CHECK(merged[0] == early);
    CHECK(merged[1] == door);
    CHECK(merged[2] == device);
    CHECK(merged[3] == motion);
    CHECK(merge_events({merged}) == merged);
  }

  TEST_CASE("breakfast simulation senses coffeemaker, fridge and toaster") {
    const auto layout = ambisim::testing::home_a();
    const auto suite = instrument(layout);
    const auto script = ambisim::testing::parse_clean(
        pipeline::read_text_file(data_path("scripts/breakfast_block.txt")));
    const auto sensed = pipeline::simulate_and_sense(script, layout, suite, sim::SimParams{});
    std::size_t bound = 0, motion = 0;
    for (const auto& e : sensed.events) (e.kind == SensorKind::Motion ? motion : bound)++;
    CHECK(bound == 4);
    CHECK(motion > 0);
    for (std::size_t i = 1; i < sensed.events.size(); ++i) {
      CHECK(sensed.events[i - 1].timestamp <= sensed.events[i].timestamp);
    }
  }

  TEST_CASE("string conversions") {
    for (auto k : {SensorKind::Door, SensorKind::Device, SensorKind::Motion}) {
      CHECK(kind_from_string(to_string(k)) == k);
    }
    for (auto v : {SensorValue::On, SensorValue::Off, SensorValue::Open, SensorValue::Close}) {
      CHECK(value_from_string(to_string(v)) == v);
    }
  }
}
