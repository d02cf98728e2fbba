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

#include "ambisim/grounding.hpp"

namespace ambisim::grounding {

using nlohmann::json;

Grounder::Grounder(EmbeddingProvider& provider, VocabularyIndex actions, VocabularyIndex objects,
                   GroundingThresholds thresholds)
    : provider_(provider),
      actions_(std::move(actions)),
      objects_(std::move(objects)),
      thresholds_(thresholds) {
  thresholds_.validate();
  if (actions_.kind() != VocabularyKind::Action) throw GroundingError("action index has wrong kind");
  if (objects_.kind() != VocabularyKind::Object) throw GroundingError("object index has wrong kind");
}

StepResult Grounder::ground_step(std::string_view line, std::optional<std::string_view> room) {
  auto parsed = parse_raw_command(line);
  if (auto* reason = std::get_if<std::string>(&parsed)) return Flagged{"", 0.0, *reason};
  const auto& cmd = std::get<RawCommand>(parsed);

  std::string room_name;
  if (room) room_name = std::string(*room);
  else if (cmd.room) room_name = *cmd.room;
  else return Flagged{"", 0.0, "command has no room annotation"};
  // Room names are matched, never grounded.
  if (!objects_.room_subset(room_name)) {
    return Flagged{room_name, 0.0, "unknown room '" + room_name + "'"};
  }
  if (cmd.start > cmd.end) return Flagged{"", 0.0, "start time after end time"};

  GroundedStep out;
  const auto verb_match = actions_.nearest(provider_.embed(normalize_token(cmd.verb)));
  if (verb_match.score < thresholds_.tau_act) {
    return Flagged{cmd.verb, verb_match.score, "action below threshold"};
  }
  out.substitutions.push_back({cmd.verb, verb_match.token, verb_match.score});
  const auto verb = script::verb_from_name(verb_match.token);
  if (!verb) return Flagged{cmd.verb, verb_match.score, "grounded action is not a simulator verb"};
  if (cmd.objects.size() != script::verb_arity(*verb)) {
    return Flagged{cmd.verb, verb_match.score,
                   "'" + verb_match.token + "' takes " + std::to_string(script::verb_arity(*verb)) +
                       " object(s), got " + std::to_string(cmd.objects.size())};
  }

  out.step.verb = *verb;
  for (const auto& raw : cmd.objects) {
    const auto match = objects_.nearest(provider_.embed(normalize_token(raw)), room_name);
    if (match.score < thresholds_.tau_obj) {
      return Flagged{raw, match.score, "object below threshold"};
    }
    out.substitutions.push_back({raw, match.token, match.score});
    out.step.objects.push_back(match.token);
  }
  out.step.start = cmd.start;
  out.step.end = cmd.end;
  out.step.room = room_name;
  return out;
}

GroundingResult Grounder::ground_script(std::string_view raw_text, RepairProvider& repair) {
  GroundingResult result;
  const auto cleaned = clean_output(raw_text);
  result.report.dropped_unrecognized = cleaned.dropped_unrecognized;

  for (std::size_t i = 0; i < cleaned.lines.size(); ++i) {
    const auto& line = cleaned.lines[i];
    LineOutcome outcome{line.source_line, line.text, Discarded{}};

    auto first = ground_step(line.text);
    if (auto* g = std::get_if<GroundedStep>(&first)) {
      if (result.script.append(g->step, line.activity)) {
        outcome.outcome = Accepted{g->substitutions};
      } else {
        outcome.outcome = Discarded{"step starts before the previous step", 0};
      }
      result.report.lines.push_back(std::move(outcome));
      continue;
    }

    std::string reason = std::get<Flagged>(first).reason;
    std::optional<std::string> fallback_room;
    const auto original = parse_raw_command(line.text);
    if (const auto* cmd = std::get_if<RawCommand>(&original)) fallback_room = cmd->room;
    std::vector<std::string> context;
    for (std::size_t k = (i >= 2 ? i - 2 : 0); k < std::min(cleaned.lines.size(), i + 3); ++k) {
      if (k != i) context.push_back(cleaned.lines[k].text);
    }

    int attempts = 0;
    bool fixed = false;
    while (attempts < thresholds_.max_retries) {
      auto candidate = repair.repair(line.text, context);
      if (!candidate) break;
      ++attempts;
      std::optional<std::string_view> room_override;
      auto cand_parsed = parse_raw_command(*candidate);
      if (auto* c = std::get_if<RawCommand>(&cand_parsed); c && !c->room && fallback_room) {
        room_override = *fallback_room;
      }
      auto retry = ground_step(*candidate, room_override);
      if (auto* g = std::get_if<GroundedStep>(&retry)) {
        if (result.script.append(g->step, line.activity)) {
          outcome.outcome = Repaired{attempts, g->substitutions};
          fixed = true;
          break;
        }
        reason = "step starts before the previous step";
      } else {
        reason = std::get<Flagged>(retry).reason;
      }
    }
    if (!fixed) outcome.outcome = Discarded{reason, attempts};
    result.report.lines.push_back(std::move(outcome));
  }
  return result;
}

std::size_t GroundingReport::accepted() const {
  return std::count_if(lines.begin(), lines.end(), [](const LineOutcome& l) {
    return std::holds_alternative<Accepted>(l.outcome);
  });
}

std::size_t GroundingReport::repaired() const {
  return std::count_if(lines.begin(), lines.end(), [](const LineOutcome& l) {
    return std::holds_alternative<Repaired>(l.outcome);
  });
}

std::size_t GroundingReport::discarded() const {
  return std::count_if(lines.begin(), lines.end(), [](const LineOutcome& l) {
    return std::holds_alternative<Discarded>(l.outcome);
  });
}

namespace {

json substitutions_json(const std::vector<Substitution>& subs) {
  json out = json::array();
  for (const auto& s : subs) out.push_back({{"raw", s.raw}, {"grounded", s.grounded}, {"score", s.score}});
  return out;
}

}  // namespace

json GroundingReport::to_json() const {
  json out;
  out["accepted"] = accepted();
  out["repaired"] = repaired();
  out["discarded"] = discarded();
  out["dropped_unrecognized"] = dropped_unrecognized;
  out["lines"] = json::array();
  for (const auto& l : lines) {
    json entry{{"line", l.source_line}, {"text", l.text}};
    if (auto* a = std::get_if<Accepted>(&l.outcome)) {
      entry["outcome"] = "accepted";
      entry["substitutions"] = substitutions_json(a->substitutions);
    } else if (auto* r = std::get_if<Repaired>(&l.outcome)) {
      entry["outcome"] = "repaired";
      entry["attempts"] = r->attempts;
      entry["substitutions"] = substitutions_json(r->substitutions);
    } else {
      const auto& d = std::get<Discarded>(l.outcome);
      entry["outcome"] = "discarded";
      entry["attempts"] = d.attempts;
      entry["reason"] = d.reason;
    }
    out["lines"].push_back(std::move(entry));
  }
  return out;
}

}  // namespace ambisim::grounding
