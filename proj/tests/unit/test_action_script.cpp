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
#include <string>

#include "ambisim/action_script.hpp"
#include "ambisim/pipeline.hpp"
#include "test_support.hpp"

using namespace ambisim::script;
using ambisim::pipeline::read_text_file;
using ambisim::testing::data_path;

namespace {

ParseError parse_error(const std::string& line) {
  try {
    parse_line(line);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << line);
  return ParseError(ParseErrorKind::Bracketing, 0, "");
}

}  // namespace

TEST_SUITE("action_script") {
  TEST_CASE("parses the breakfast walk line") {
    const auto step = parse_line("[walk] <kitchen> (07:10 - 07:10) (kitchen)");
    CHECK(step.verb == ActionVerb::Walk);
    REQUIRE(step.objects.size() == 1);
    CHECK(step.objects[0] == "kitchen");
    CHECK(step.start == TimeOfDay{7, 10});
    CHECK(step.end == TimeOfDay{7, 10});
    CHECK(step.room == "kitchen");
  }

  TEST_CASE("put takes two objects and single-digit hours are accepted") {
    const auto step = parse_line("[put] <toothpaste> <toothbrush> (7:22 - 7:23) (bathroom)");
    CHECK(step.verb == ActionVerb::Put);
    REQUIRE(step.objects.size() == 2);
    CHECK(step.objects[0] == "toothpaste");
    CHECK(step.objects[1] == "toothbrush");
    CHECK(render_step(step) == "[put] <toothpaste> <toothbrush> (07:22 - 07:23) (bathroom)");
  }

  TEST_CASE("verbs are case-insensitive and the en-dash separates times") {
    const auto step = parse_line("[SwitchOn] <toaster> (07:17 \xE2\x80\x93 07:17) (kitchen)");
    CHECK(step.verb == ActionVerb::SwitchOn);
    CHECK(render_step(step) == "[switchon] <toaster> (07:17 - 07:17) (kitchen)");
  }

  TEST_CASE("error kinds and columns") {
    auto e = parse_error("[standup] <chair> (08:00 - 08:01) (bedroom)");
    CHECK(e.kind() == ParseErrorKind::Arity);
    CHECK(e.column() == 2);

    e = parse_error("[fly] <kite> (08:00 - 08:01) (garden)");
    CHECK(e.kind() == ParseErrorKind::UnknownVerb);
    CHECK(e.column() == 2);

    e = parse_error("walk <kitchen> (08:00 - 08:01) (kitchen)");
    CHECK(e.kind() == ParseErrorKind::Bracketing);
    CHECK(e.column() == 1);

    e = parse_error("[walk] <kitchen> (25:00 - 25:01) (kitchen)");
    CHECK(e.kind() == ParseErrorKind::BadTime);
    CHECK(e.column() == 19);

    e = parse_error("[walk] <kitchen> (09:00 - 08:00) (kitchen)");
    CHECK(e.kind() == ParseErrorKind::TimeOrder);

    e = parse_error("[walk] <kitchen> (08:00 - 08:01)");
    CHECK(e.kind() == ParseErrorKind::Bracketing);

    e = parse_error("[walk] <kitchen (08:00 - 08:01) (kitchen)");
    CHECK(e.kind() == ParseErrorKind::Bracketing);

    e = parse_error("[walk] <kitchen> (08:00 - 08:01) (kitchen) extra");
    CHECK(e.kind() == ParseErrorKind::Bracketing);
  }

  TEST_CASE("render examples") {
    CHECK(render_step({ActionVerb::Walk, {"kitchen"}, {7, 10}, {7, 10}, "kitchen"}) ==
          "[walk] <kitchen> (07:10 - 07:10) (kitchen)");
    CHECK(render_step({ActionVerb::TurnLeft, {}, {9, 5}, {9, 5}, "bedroom"}) ==
          "[turnleft] (09:05 - 09:05) (bedroom)");
  }

  TEST_CASE("parse of render is the identity on fuzzed steps") {
    std::mt19937_64 rng(20260101);
    for (int i = 0; i < 10000; ++i) {
      const auto step = ambisim::testing::random_step(rng);
      const auto text = render_step(step);
      const auto back = parse_line(text);
      REQUIRE_MESSAGE(back == step, text);
      REQUIRE(render_step(back) == text);
    }
  }

  TEST_CASE("canonical breakfast block parses with no diagnostics") {
    const auto parsed = parse_script(read_text_file(data_path("scripts/breakfast_block.txt")));
    CHECK(parsed.diagnostics.empty());
    CHECK(parsed.script.size() == 23);
    CHECK(parsed.script.metadata.activity == "breakfast");
    CHECK(parsed.script.steps().front().start == TimeOfDay{7, 10});
    CHECK(parsed.script.steps().back().end == TimeOfDay{7, 30});
  }

  TEST_CASE("empty text gives an empty script") {
    const auto parsed = parse_script("");
    CHECK(parsed.script.empty());
    CHECK(parsed.diagnostics.empty());
  }

  TEST_CASE("one malformed line among five is reported, the rest kept") {
    const std::string text =
        "[walk] <kitchen> (07:10 - 07:10) (kitchen)\n"
        "[open] <fridge> (07:11 - 07:11) (kitchen)\n"
        "\n"
        "[grab <milk> (07:12 - 07:12) (kitchen)\n"
        "[close] <fridge> (07:13 - 07:13) (kitchen)\n"
        "[drink] <milk> (07:14 - 07:15) (kitchen)\n";
    const auto parsed = parse_script(text);
    CHECK(parsed.script.size() == 4);
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].line == 4);
    CHECK(parsed.diagnostics[0].kind == ParseErrorKind::Bracketing);
  }

  TEST_CASE("accepted plus rejected equals non-blank step lines") {
    std::mt19937_64 rng(7);
    std::string text;
    std::size_t lines = 0;
    for (int i = 0; i < 200; ++i) {
      auto step = ambisim::testing::random_step(rng);
      step.start = step.end = {i / 60, i % 60};
      auto line = render_step(step);
      if (rng() % 4 == 0) line.erase(line.find(')'), 1);
      text += line + "\n";
      ++lines;
    }
    const auto parsed = parse_script(text);
    CHECK(parsed.script.size() + parsed.diagnostics.size() == lines);
    CHECK_FALSE(parsed.diagnostics.empty());
  }

  TEST_CASE("a start more than twelve hours earlier crosses midnight") {
    const auto parsed = parse_script(
        "[walk] <bed> (23:50 - 23:55) (bedroom)\n"
        "[sit] <bed> (00:05 - 06:00) (bedroom)\n");
    REQUIRE(parsed.diagnostics.empty());
    REQUIRE(parsed.script.size() == 2);
    CHECK(parsed.script.contexts()[1].day == 1);
    CHECK(parsed.script.absolute_start(1) == 1440 + 5);
  }

  TEST_CASE("a small backwards step violates ordering") {
    const auto parsed = parse_script(
        "[walk] <sofa> (10:00 - 10:05) (livingroom)\n"
        "[sit] <sofa> (09:00 - 09:30) (livingroom)\n");
    CHECK(parsed.script.size() == 1);
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].kind == ParseErrorKind::Ordering);
    CHECK(parsed.diagnostics[0].line == 2);
  }

  TEST_CASE("header metadata and activity markers round-trip") {
    const std::string text =
        "---\n"
        "persona: retired teacher\n"
        "day: 3\n"
        "activity: breakfast\n"
        "walk_speed: 0.80000000000000004\n"
        "labels: Breakfast, Eat\n"
        "---\n"
        "[walk] <kitchen> (07:10 - 07:10) (kitchen)\n"
        "# activity: reading\n"
        "[sit] <sofa> (08:00 - 08:30) (livingroom)\n";
    const auto parsed = parse_script(text);
    REQUIRE(parsed.diagnostics.empty());
    const auto& m = parsed.script.metadata;
    CHECK(m.persona == "retired teacher");
    CHECK(m.day == "3");
    CHECK(m.walk_speed == doctest::Approx(0.8));
    CHECK(m.label_candidates == std::vector<std::string>{"Breakfast", "Eat"});
    CHECK(parsed.script.contexts()[0].activity == "breakfast");
    CHECK(parsed.script.contexts()[1].activity == "reading");
    CHECK(render_script(parsed.script) == text);
  }

  TEST_CASE("invalid walk_speed header is a diagnostic") {
    const auto parsed = parse_script("---\nwalk_speed: fast\n---\n");
    CHECK(parsed.diagnostics.size() == 1);
    CHECK_FALSE(parsed.script.metadata.walk_speed.has_value());
  }
}
