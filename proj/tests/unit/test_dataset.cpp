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

#include <fstream>
#include <sstream>
#include <string>

#include "ambisim/dataset.hpp"
#include "ambisim/pipeline.hpp"
#include "test_support.hpp"

using namespace ambisim;
using namespace ambisim::dataset;
using ambisim::testing::data_path;
using sensors::SensorEvent;
using sensors::SensorKind;
using sensors::SensorValue;

namespace {

const Timestamp kDay = midnight(std::chrono::year{2024} / std::chrono::January / 1);

Timestamp at(int hour, int minute, int second = 0) {
  return Timestamp{kDay.micros + (hour * 60 + minute) * kMicrosPerMinute + second * kMicrosPerSecond};
}

SensorEvent motion(Timestamp t, std::string room = "bedroom", SensorValue v = SensorValue::On) {
  return {t, "M001", SensorKind::Motion, v, std::move(room), std::nullopt};
}

LabelMapping cairo() { return LabelMapping("Cairo", {{"breakfast", "Breakfast"}, {"sleeping", "Sleep"}}); }

ActivityWindow window_of(std::size_t events, const std::string& label) {
  ActivityWindow w;
  w.label = label;
  for (std::size_t i = 0; i < events; ++i) w.events.push_back(motion(at(7, 0, static_cast<int>(i))));
  return w;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("a 150-event span is truncated to the first 100 events") {
    std::vector<SensorEvent> events;
    for (int i = 0; i < 150; ++i) events.push_back(motion(Timestamp{at(7, 0).micros + i * 1000}));
    const std::vector<ActivitySpan> spans{{"breakfast", at(7, 0), at(8, 0), "kitchen"}};
    const auto seg = segment_windows(events, spans, cairo());
    REQUIRE(seg.windows.size() == 1);
    const auto& w = seg.windows[0];
    CHECK(w.events.size() == kMaxWindowEvents);
    CHECK(w.events.front() == events.front());
    CHECK(w.events.back() == events[99]);
    CHECK(w.label == "Breakfast");
  }

  TEST_CASE("spans without events are dropped and counted") {
    const std::vector<SensorEvent> events{motion(at(7, 5))};
    const std::vector<ActivitySpan> spans{{"sleeping", at(0, 0), at(6, 0), "bedroom"},
                                          {"breakfast", at(7, 0), at(7, 30), "kitchen"}};
    const auto seg = segment_windows(events, spans, cairo(), {"p", "home_a", "2024-01-01"});
    CHECK(seg.dropped_spans == 1);
    REQUIRE(seg.windows.size() == 1);
    CHECK(seg.windows[0].source.home == "home_a");
  }

  TEST_CASE("spans are half-open and must not overlap") {
    const std::vector<SensorEvent> events{motion(at(7, 0)), motion(at(7, 30))};
    const std::vector<ActivitySpan> spans{{"breakfast", at(7, 0), at(7, 30), "kitchen"},
                                          {"sleeping", at(7, 30), at(8, 0), "bedroom"}};
    const auto seg = segment_windows(events, spans, cairo());
    REQUIRE(seg.windows.size() == 2);
    CHECK(seg.windows[0].events.size() == 1);
    CHECK(seg.windows[1].events.size() == 1);

    const std::vector<ActivitySpan> overlapping{{"breakfast", at(7, 0), at(7, 31), "kitchen"},
                                                {"sleeping", at(7, 30), at(8, 0), "bedroom"}};
    CHECK_THROWS_AS(segment_windows(events, overlapping, cairo()), DatasetError);
  }

  TEST_CASE("label mapping lookup") {
    const auto milan = LabelMapping::from_file(data_path("mappings/milan.json").string());
    CHECK(milan.map("brushing_teeth") == "Master_Bathroom");
    CHECK(milan.map("Brushing_Teeth") == "Master_Bathroom");
    CHECK(milan.map("brushing teeth") == "Master_Bathroom");
    CHECK(milan.map("juggling_practice") == "Other");
    CHECK(map_label("juggling_practice", milan) == "Other");
    CHECK(milan.label_set().count("Other") == 1);
    CHECK(normalize_activity("Wash-Dishes Now") == "wash_dishes_now");
    CHECK(LabelMapping::from_json(milan.to_json()).map("sleeping") == "Sleep");
    CHECK_THROWS_AS(LabelMapping::from_json(
                        {{"entries", {{"sleeping", "Nap"}}}, {"labels", {"Sleep"}}}),
                    DatasetError);
  }

  TEST_CASE("TDOST basic sentences") {
    CHECK(tdost_basic(motion(at(12, 6))) == "Motion sensor in bedroom fired with value ON");
    const SensorEvent door{at(7, 13), "D001", SensorKind::Door, SensorValue::Open, "kitchen", "fridge"};
    CHECK(tdost_basic(door) == "Door sensor in kitchen fired with value OPEN");
    const SensorEvent device{at(7, 13), "D002", SensorKind::Device, SensorValue::Off, "kitchen", "toaster"};
    CHECK(tdost_basic(device) == "Device sensor in kitchen fired with value OFF");
  }

  TEST_CASE("TDOST temporal sentences") {
    CHECK(tdost_temporal(motion(at(12, 6))) ==
          "Motion sensor in bedroom fired with value ON at twelve hours six minutes PM");
    CHECK(tdost_temporal(motion(at(0, 0))) ==
          "Motion sensor in bedroom fired with value ON at twelve hours zero minutes AM");
    CHECK(tdost_temporal(motion(at(9, 45))) ==
          "Motion sensor in bedroom fired with value ON at nine hours forty five minutes AM");
    CHECK(tdost_temporal(motion(at(23, 59, 59))) ==
          "Motion sensor in bedroom fired with value ON at eleven hours fifty nine minutes PM");
    CHECK(tdost(motion(at(12, 6)), TdostVariant::Basic) == tdost_basic(motion(at(12, 6))));
    CHECK(variant_from_string(to_string(TdostVariant::Temporal)) == TdostVariant::Temporal);
  }

  TEST_CASE("number words") {
    CHECK(number_words(0) == "zero");
    CHECK(number_words(13) == "thirteen");
    CHECK(number_words(20) == "twenty");
    CHECK(number_words(45) == "forty five");
    CHECK(number_words(59) == "fifty nine");
  }

  TEST_CASE("CASAS export of an empty stream is empty") {
    const auto log = build_casas_log({}, {}, cairo());
    std::ostringstream out;
    write_casas(out, log);
    CHECK(out.str().empty());
  }

  TEST_CASE("a one-event span carries begin then end on the same line") {
    const std::vector<SensorEvent> events{motion(at(7, 12))};
    const std::vector<ActivitySpan> spans{{"breakfast", at(7, 10), at(7, 30), "kitchen"}};
    std::ostringstream out;
    write_casas(out, build_casas_log(events, spans, cairo()));
    CHECK(out.str() == "2024-01-01 07:12:00.000000\tM001\tON\tBreakfast\tbegin\tBreakfast\tend\n");
  }

  TEST_CASE("CASAS write then read is the identity") {
    std::vector<SensorEvent> events;
    for (int i = 0; i < 20; ++i) {
      events.push_back(motion(at(7, i), "kitchen", i % 2 ? SensorValue::Off : SensorValue::On));
    }
    events.push_back({at(7, 3, 30), "D001", SensorKind::Door, SensorValue::Open, "kitchen", "fridge"});
    events = sensors::merge_events({events});
    const std::vector<ActivitySpan> spans{{"breakfast", at(7, 0), at(7, 8), "kitchen"},
                                          {"juggling", at(7, 10), at(7, 15), "kitchen"}};
    const auto log = build_casas_log(events, spans, cairo());
    REQUIRE(log.annotations.size() == 2);
    CHECK(log.annotations[1].label == "Other");
    std::ostringstream out;
    write_casas(out, log);
    std::istringstream in(out.str());
    CHECK(read_casas(in) == log);

    ambisim::testing::ScratchDir dir("casas");
    const auto path = (dir.path() / "events.casas").string();
    export_casas(events, spans, cairo(), path);
    CHECK(pipeline::read_text_file(path) == out.str());
  }

  TEST_CASE("malformed CASAS input is rejected with a line number") {
    std::istringstream dangling("2024-01-01 07:00:00.000000\tM001\tON\tBreakfast\tend\n");
    CHECK_THROWS_AS(read_casas(dangling), DatasetError);
    std::istringstream short_line("2024-01-01 07:00:00.000000\tM001\n");
    try {
      read_casas(short_line);
      FAIL("expected an error");
    } catch (const DatasetError& e) {
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }

  TEST_CASE("statistics") {
    const auto empty = compute_stats({});
    CHECK(empty.window_count == 0);
    CHECK(empty.total_triggers == 0);
    CHECK(empty.mean_triggers == 0.0);

    const auto s = compute_stats({window_of(3, "A"), window_of(36, "B"), window_of(99, "A")});
    CHECK(s.window_count == 3);
    CHECK(s.min_triggers == 3);
    CHECK(s.max_triggers == 99);
    CHECK(s.mean_triggers == doctest::Approx(46.0));
    CHECK(s.total_triggers == 138);
    CHECK(s.per_label.at("A") == 2);
    CHECK(s.per_kind.at("motion") == 138);
    CHECK(s.to_json()["triggers_per_window"]["mean"] == 46.0);
  }

  TEST_CASE("windows JSONL round-trips") {
    ActivityWindow w = window_of(3, "Breakfast");
    w.span = {"breakfast", at(7, 0), at(7, 30), "kitchen"};
    w.source = {"retired teacher", "home_a", "2024-01-01"};
    w.events.push_back({at(7, 5), "D001", SensorKind::Door, SensorValue::Open, "kitchen", "fridge"});
    const auto j = window_to_json(w);
    CHECK(j["tdost"]["basic"].size() == 4);
    CHECK(window_from_json(j) == w);
    std::ostringstream out;
    write_windows_jsonl(out, {w, w});
    std::istringstream in(out.str());
    const auto back = read_windows_jsonl(in);
    REQUIRE(back.size() == 2);
    CHECK(back[1] == w);
  }
}
