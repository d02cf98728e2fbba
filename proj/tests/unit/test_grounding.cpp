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
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include <httplib.h>

#include "ambisim/grounding.hpp"
#include "ambisim/pipeline.hpp"
#include "test_support.hpp"

using namespace ambisim;
using namespace ambisim::grounding;
using ambisim::testing::data_path;

namespace {

struct Fixture {
  HashEmbeddingProvider provider{64};
  env::HomeLayout layout = ambisim::testing::home_a();
  Vocabulary vocabulary = load_vocabulary_file(data_path("vocabulary.json").string());

  Grounder grounder(GroundingThresholds thresholds = {}) {
    return Grounder(provider, build_action_index(vocabulary, provider),
                    build_object_index(layout, vocabulary, provider), thresholds);
  }
};

/// Replays a fixed list of candidate lines, then offers nothing.
class ScriptedRepair : public RepairProvider {
 public:
  explicit ScriptedRepair(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::optional<std::string> repair(const std::string&, const std::vector<std::string>&) override {
    ++calls;
    if (next_ >= replies_.size()) return std::nullopt;
    return replies_[next_++];
  }
  int calls = 0;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

std::string grounded_text(const StepResult& r) {
  const auto* g = std::get_if<GroundedStep>(&r);
  return g ? script::render_step(g->step) : std::string("<flagged>");
}

}  // namespace

TEST_SUITE("grounding") {
  TEST_CASE("cosine examples") {
    const std::vector<double> u{1, 2, 3}, v{4, 5, 6};
    CHECK(cosine(u, v) == doctest::Approx(32.0 / (std::sqrt(14.0) * std::sqrt(77.0))).epsilon(1e-12));
    CHECK(cosine(u, v) == doctest::Approx(0.974631846).epsilon(1e-9));
    CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> x{1, 0}, y{0, 1};
    CHECK(cosine(x, y) == doctest::Approx(0.0));
    const std::vector<double> zero{0, 0, 0};
    CHECK_THROWS_AS(cosine(u, zero), GroundingError);
    CHECK_THROWS_AS(cosine(u, x), GroundingError);
  }

  TEST_CASE("hash provider is deterministic, unit norm and honours synonyms") {
    HashEmbeddingProvider p(128);
    const auto a = p.embed("fridge");
    CHECK(a == p.embed("FRIDGE"));
    double n = 0;
    for (double x : a) n += x * x;
    CHECK(n == doctest::Approx(1.0));
    p.add_synonym("refrigerator", "fridge", 0.9);
    CHECK(cosine(p.embed("refrigerator"), a) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_THROWS_AS(p.add_synonym("x", "y", 1.5), GroundingError);
  }

  TEST_CASE("index construction") {
    Fixture f;
    const auto actions = build_action_index(f.vocabulary, f.provider);
    CHECK(actions.size() == 16);
    CHECK(actions.dimension() == 64);
    CHECK(actions.kind() == VocabularyKind::Action);
    CHECK_THROWS_AS(VocabularyIndex::build({"fridge", "stove", "fridge"}, VocabularyKind::Object, {},
                                           f.provider),
                    GroundingError);

    const auto objects = build_object_index(f.layout, f.vocabulary, f.provider);
    const auto* kitchen = objects.room_subset("kitchen");
    REQUIRE(kitchen != nullptr);
    std::vector<std::string> names;
    for (auto i : *kitchen) names.push_back(objects.tokens()[i]);
    CHECK(std::count(names.begin(), names.end(), "toothbrush") == 0);
    CHECK(std::count(names.begin(), names.end(), "fridge") == 1);
    CHECK(objects.room_subset("garage") == nullptr);
  }

  TEST_CASE("nearest returns exact tokens with score 1 and respects the room partition") {
    Fixture f;
    const auto objects = build_object_index(f.layout, f.vocabulary, f.provider);
    const auto m = nearest(objects, f.provider, "fridge");
    CHECK(m.token == "fridge");
    CHECK(m.score == doctest::Approx(1.0).epsilon(1e-12));

    const auto* bath = objects.room_subset("bathroom");
    REQUIRE(bath != nullptr);
    for (const auto* q : {"fridge", "toaster", "sofa", "refrigerator"}) {
      const auto r = nearest(objects, f.provider, q, "bathroom");
      bool member = false;
      for (auto i : *bath) member |= objects.tokens()[i] == r.token;
      CHECK_MESSAGE(member, q);
    }
  }

  TEST_CASE("nearest agrees with an exhaustive scan") {
    HashEmbeddingProvider provider(32);
    const auto index =
        VocabularyIndex::build({"fridge", "stove", "sink"}, VocabularyKind::Object, {}, provider);
    const auto q = provider.embed("refrigerator");
    std::string best;
    double best_score = -2;
    for (std::size_t i = 0; i < index.size(); ++i) {
      const double s = cosine(q, provider.embed(index.tokens()[i]));
      if (s > best_score) best_score = s, best = index.tokens()[i];
    }
    const auto m = index.nearest(q);
    CHECK(m.token == best);
    CHECK(m.score == doctest::Approx(best_score));
  }

  TEST_CASE("clean_output on the brushing_teeth breakdown") {
    const auto text = pipeline::read_text_file(data_path("scripts/brushing_teeth_breakdown.txt"));
    const auto cleaned = clean_output(text);
    REQUIRE(cleaned.lines.size() == 10);
    for (const auto& line : cleaned.lines) {
      CHECK_MESSAGE(line.text.size() > 10, line.text);
      CHECK(line.text.substr(line.text.size() - 10) == "(bathroom)");
    }
    CHECK(cleaned.lines[2].text == "[walk] <bathroomcounter> (07:20 - 07:21) (bathroom)");
    CHECK(cleaned.lines[8].text == "[put] <waterglass> <bathroomcounter> (07:25 - 07:25) (bathroom)");
    CHECK(cleaned.lines[0].source_line == 2);  // "Step 1: [walk] <bathroom>"
  }

  TEST_CASE("clean_output applies the header room to a numbered step") {
    const auto cleaned =
        clean_output("7:20 - 7:22, bathroom\nStep 3: [walk] <bathroomcounter> (7:20 - 7:21)\n");
    REQUIRE(cleaned.lines.size() == 1);
    CHECK(cleaned.lines[0].text == "[walk] <bathroomcounter> (07:20 - 07:21) (bathroom)");
  }

  TEST_CASE("clean_output drops header-only text") {
    const auto cleaned = clean_output(
        "Day 1\nBreakfast (07:10 - 07:30) (kitchen)\nActivity: Reading\n7:20 - 7:22, bathroom\n---\n");
    CHECK(cleaned.lines.empty());
  }

  TEST_CASE("clean_output joins the wrapped canonical breakfast block") {
    const auto text = pipeline::read_text_file(data_path("scripts/breakfast_block_raw.txt"));
    const auto cleaned = clean_output(text);
    REQUIRE(cleaned.lines.size() == 23);
    const auto canonical = script::parse_script(
        pipeline::read_text_file(data_path("scripts/breakfast_block.txt")));
    for (std::size_t i = 0; i < 23; ++i) {
      CHECK(cleaned.lines[i].text == script::render_step(canonical.script.steps()[i]));
    }
  }

  TEST_CASE("misspelled tokens ground to their nearest vocabulary entry") {
    Fixture f;
    f.provider.add_synonym("wallk", "walk", 0.9);
    f.provider.add_synonym("friedge", "fridge", 0.9);
    auto g = f.grounder();
    const auto r = g.ground_step("[wallk] <friedge> (07:13 - 07:13) (kitchen)");
    CHECK(grounded_text(r) == "[walk] <fridge> (07:13 - 07:13) (kitchen)");
    const auto& subs = std::get<GroundedStep>(r).substitutions;
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].score == doctest::Approx(0.9));
  }

  TEST_CASE("exact vocabulary lines ground unchanged with score 1") {
    Fixture f;
    auto g = f.grounder();
    const std::string line = "[switchon] <toaster> (07:17 - 07:17) (kitchen)";
    const auto r = g.ground_step(line);
    CHECK(grounded_text(r) == line);
    for (const auto& s : std::get<GroundedStep>(r).substitutions) {
      CHECK(s.score == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("verbs below the action threshold are flagged") {
    Fixture f;
    f.provider.add_synonym("amble", "walk", 0.5);
    auto g = f.grounder();
    const auto r = g.ground_step("[amble] <fridge> (07:13 - 07:13) (kitchen)");
    REQUIRE(std::holds_alternative<Flagged>(r));
    CHECK(std::get<Flagged>(r).token == "amble");
    CHECK(std::get<Flagged>(r).best_score < 0.8);
  }

  TEST_CASE("unknown rooms are flagged, never remapped") {
    Fixture f;
    auto g = f.grounder();
    const auto r = g.ground_step("[walk] <fridge> (07:13 - 07:13) (garage)");
    REQUIRE(std::holds_alternative<Flagged>(r));
    CHECK(std::get<Flagged>(r).reason.find("garage") != std::string::npos);
  }

  TEST_CASE("grounding is idempotent and monotone in the thresholds") {
    Fixture f;
    f.provider.add_synonym("wallk", "walk", 0.85);
    f.provider.add_synonym("friedge", "fridge", 0.7);
    f.provider.add_synonym("tosater", "toaster", 0.62);
    const std::vector<std::string> lines{
        "[wallk] <friedge> (07:13 - 07:13) (kitchen)",
        "[switchon] <tosater> (07:17 - 07:17) (kitchen)",
        "[grab] <friedge> (07:18 - 07:18) (kitchen)",
        "[walk] <bed> (07:19 - 07:20) (bedroom)",
    };
    auto loose = f.grounder({0.8, 0.6, 3});
    auto tight = f.grounder({0.9, 0.65, 3});
    for (const auto& line : lines) {
      const auto a = loose.ground_step(line);
      const auto b = tight.ground_step(line);
      if (std::holds_alternative<GroundedStep>(b)) CHECK(std::holds_alternative<GroundedStep>(a));
      if (const auto* g = std::get_if<GroundedStep>(&a)) {
        const auto text = script::render_step(g->step);
        CHECK(grounded_text(loose.ground_step(text)) == text);
      }
    }
  }

  TEST_CASE("ground_script with clean input accepts every line") {
    Fixture f;
    auto g = f.grounder();
    NullRepairProvider none;
    const auto result = g.ground_script(
        pipeline::read_text_file(data_path("scripts/breakfast_block_raw.txt")), none);
    CHECK(result.report.accepted() == 23);
    CHECK(result.report.discarded() == 0);
    CHECK(result.script.size() == 23);
  }

  TEST_CASE("unfixable line with the null repair provider is discarded after zero attempts") {
    Fixture f;
    auto g = f.grounder({0.8, 0.6, 3});
    NullRepairProvider none;
    const auto result = g.ground_script(
        "[walk] <fridge> (07:13 - 07:13) (kitchen)\n"
        "[fly] <fridge> (07:14 - 07:14) (kitchen)\n"
        "[open] <fridge> (07:15 - 07:15) (kitchen)\n",
        none);
    CHECK(result.script.size() == 2);
    REQUIRE(result.report.lines.size() == 3);
    const auto* d = std::get_if<Discarded>(&result.report.lines[1].outcome);
    REQUIRE(d != nullptr);
    CHECK(d->attempts == 0);
    CHECK(result.report.to_json()["discarded"] == 1);
  }

  TEST_CASE("scripted repair succeeding on the second attempt") {
    Fixture f;
    auto g = f.grounder({0.8, 0.6, 3});
    ScriptedRepair repair({"[fly] <fridge> (07:14 - 07:14)", "[open] <fridge> (07:14 - 07:14)"});
    const auto result = g.ground_script("[fly] <fridge> (07:14 - 07:14) (kitchen)\n", repair);
    REQUIRE(result.report.lines.size() == 1);
    const auto* r = std::get_if<Repaired>(&result.report.lines[0].outcome);
    REQUIRE(r != nullptr);
    CHECK(r->attempts == 2);
    REQUIRE(result.script.size() == 1);
    CHECK(script::render_step(result.script.steps()[0]) ==
          "[open] <fridge> (07:14 - 07:14) (kitchen)");
  }

  TEST_CASE("repair stops at max_retries") {
    Fixture f;
    auto g = f.grounder({0.8, 0.6, 2});
    ScriptedRepair repair({"[fly] <a> (07:14 - 07:14)", "[fly] <b> (07:14 - 07:14)",
                           "[open] <fridge> (07:14 - 07:14)"});
    const auto result = g.ground_script("[fly] <fridge> (07:14 - 07:14) (kitchen)\n", repair);
    const auto* d = std::get_if<Discarded>(&result.report.lines[0].outcome);
    REQUIRE(d != nullptr);
    CHECK(d->attempts == 2);
    CHECK(repair.calls == 2);
  }

  TEST_CASE("threshold validation") {
    CHECK_THROWS_AS((GroundingThresholds{1.5, 0.6, 3}.validate()), GroundingError);
    CHECK_THROWS_AS((GroundingThresholds{0.8, 0.6, -1}.validate()), GroundingError);
  }

  TEST_CASE("HTTP provider talks to a JSON embedding endpoint") {
    httplib::Server server;
    std::string seen_auth;
    server.Post("/v1/embed", [&](const httplib::Request& req, httplib::Response& res) {
      seen_auth = req.get_header_value("Authorization");
      const auto body = nlohmann::json::parse(req.body);
      nlohmann::json out{{"embeddings", nlohmann::json::array()}};
      for (const auto& t : body["input"]) {
        const auto s = t.get<std::string>();
        out["embeddings"].push_back({static_cast<double>(s.size()), 1.0, 0.0});
      }
      res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpEmbeddingProvider provider("http://127.0.0.1:" + std::to_string(port) + "/v1/embed",
                                   "secret");
    const auto v = provider.embed("walk");
    CHECK(v == std::vector<double>{4.0, 1.0, 0.0});
    CHECK(provider.dimension() == 3);
    CHECK(seen_auth == "Bearer secret");
    const auto batch = provider.embed_batch({"a", "abc"});
    REQUIRE(batch.size() == 2);
    CHECK(batch[1][0] == 3.0);

    HttpEmbeddingProvider missing("http://127.0.0.1:" + std::to_string(port) + "/nope");
    CHECK_THROWS_AS(missing.embed("x"), GroundingError);

    server.stop();
    worker.join();
    CHECK_THROWS_AS(HttpEmbeddingProvider("https://example.invalid/"), GroundingError);
  }
}
