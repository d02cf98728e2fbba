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
#include <set>
#include <sstream>

#include "ambisim/action_script.hpp"
#include "ambisim/common.hpp"
#include "ambisim/corpus.hpp"

namespace ambisim::corpus {

namespace {

constexpr int kLastMinute = 23 * 60 + 59;
constexpr int kUntilDayEnd = -1;

// One command of an activity template. `object` names an object class, or
// "@" for the role's room itself; `target` is the second argument of [put].
struct StepTemplate {
  const char* verb;
  const char* object;
  const char* target;
  const char* role;
  int min_minutes;
  int max_minutes;
};

struct ActivityTemplate {
  const char* name;
  int planned_start;  // minutes after midnight
  int jitter;         // +/- minutes
  double probability;
  std::vector<StepTemplate> steps;
};

const std::vector<StepTemplate>& brushing_steps() {
  static const std::vector<StepTemplate> steps{
      {"walk", "@", nullptr, "bathroom", 1, 1},
      {"switchon", "lightswitch", nullptr, "bathroom", 0, 0},
      {"walk", "sink", nullptr, "bathroom", 1, 1},
      {"grab", "toothbrush", nullptr, "bathroom", 0, 0},
      {"switchon", "faucet", nullptr, "bathroom", 0, 0},
      {"touch", "toothbrush", nullptr, "bathroom", 2, 4},
      {"switchoff", "faucet", nullptr, "bathroom", 0, 0},
      {"put", "toothbrush", "sink", "bathroom", 0, 1},
      {"switchoff", "lightswitch", nullptr, "bathroom", 0, 0},
  };
  return steps;
}

const std::vector<StepTemplate>& dishes_steps() {
  static const std::vector<StepTemplate> steps{
      {"walk", "sink", nullptr, "kitchen", 1, 1},
      {"switchon", "faucet", nullptr, "kitchen", 0, 0},
      {"grab", "plate", nullptr, "kitchen", 0, 1},
      {"touch", "plate", nullptr, "kitchen", 3, 6},
      {"put", "plate", "kitchencounter", "kitchen", 0, 0},
      {"switchoff", "faucet", nullptr, "kitchen", 0, 0},
      {"open", "cabinet", nullptr, "kitchen", 0, 0},
      {"close", "cabinet", nullptr, "kitchen", 1, 1},
  };
  return steps;
}

const std::vector<StepTemplate>& cooking_steps() {
  static const std::vector<StepTemplate> steps{
      {"walk", "@", nullptr, "kitchen", 1, 1},
      {"walk", "fridge", nullptr, "kitchen", 1, 1},
      {"open", "fridge", nullptr, "kitchen", 0, 0},
      {"grab", "vegetables", nullptr, "kitchen", 0, 1},
      {"close", "fridge", nullptr, "kitchen", 0, 0},
      {"walk", "stove", nullptr, "kitchen", 1, 1},
      {"put", "vegetables", "kitchencounter", "kitchen", 0, 0},
      {"switchon", "stove", nullptr, "kitchen", 0, 0},
      {"grab", "pan", nullptr, "kitchen", 0, 1},
      {"put", "pan", "stove", "kitchen", 0, 0},
      {"lookat", "stove", nullptr, "kitchen", 8, 20},
      {"switchoff", "stove", nullptr, "kitchen", 0, 0},
      {"walk", "kitchentable", nullptr, "kitchen", 1, 1},
      {"sit", "kitchentable", nullptr, "kitchen", 10, 20},
      {"standup", nullptr, nullptr, "kitchen", 0, 0},
  };
  return steps;
}

const std::vector<ActivityTemplate>& templates() {
  static const std::vector<ActivityTemplate> all{
      {"bed_to_toilet", 150, 40, 0.6,
       {{"standup", nullptr, nullptr, "bedroom", 0, 0},
        {"walk", "@", nullptr, "bathroom", 1, 1},
        {"switchon", "lightswitch", nullptr, "bathroom", 0, 0},
        {"walk", "toilet", nullptr, "bathroom", 0, 1},
        {"sit", "toilet", nullptr, "bathroom", 2, 5},
        {"standup", nullptr, nullptr, "bathroom", 0, 0},
        {"switchon", "faucet", nullptr, "bathroom", 0, 0},
        {"switchoff", "faucet", nullptr, "bathroom", 1, 1},
        {"switchoff", "lightswitch", nullptr, "bathroom", 0, 0},
        {"walk", "@", nullptr, "bedroom", 1, 1},
        {"walk", "bed", nullptr, "bedroom", 1, 1},
        {"sit", "bed", nullptr, "bedroom", 0, 0}}},
      {"showering", 390, 20, 0.9,
       {{"standup", nullptr, nullptr, "bedroom", 0, 0},
        {"walk", "@", nullptr, "bathroom", 1, 1},
        {"switchon", "lightswitch", nullptr, "bathroom", 0, 0},
        {"walk", "shower", nullptr, "bathroom", 1, 1},
        {"switchon", "shower", nullptr, "bathroom", 0, 0},
        {"touch", "shower", nullptr, "bathroom", 8, 15},
        {"switchoff", "shower", nullptr, "bathroom", 0, 0},
        {"walk", "mirror", nullptr, "bathroom", 1, 1},
        {"lookat", "mirror", nullptr, "bathroom", 1, 2}}},
      {"brushing_teeth", 400, 10, 1.0, brushing_steps()},
      {"breakfast", 420, 15, 1.0,
       {{"walk", "@", nullptr, "kitchen", 1, 1},
        {"walk", "coffeemaker", nullptr, "kitchen", 1, 1},
        {"switchon", "coffeemaker", nullptr, "kitchen", 0, 0},
        {"grab", "waterglass", nullptr, "kitchen", 0, 1},
        {"drink", "waterglass", nullptr, "kitchen", 1, 1},
        {"put", "waterglass", "kitchencounter", "kitchen", 0, 1},
        {"walk", "fridge", nullptr, "kitchen", 1, 1},
        {"open", "fridge", nullptr, "kitchen", 0, 1},
        {"grab", "bananas", nullptr, "kitchen", 0, 1},
        {"close", "fridge", nullptr, "kitchen", 0, 0},
        {"put", "bananas", "kitchencounter", "kitchen", 0, 1},
        {"walk", "toaster", nullptr, "kitchen", 1, 1},
        {"switchon", "toaster", nullptr, "kitchen", 0, 0},
        {"grab", "breadslice", nullptr, "kitchen", 0, 1},
        {"put", "breadslice", "toaster", "kitchen", 0, 0},
        {"lookat", "toaster", nullptr, "kitchen", 2, 3},
        {"switchoff", "toaster", nullptr, "kitchen", 0, 0},
        {"switchoff", "coffeemaker", nullptr, "kitchen", 0, 0},
        {"walk", "kitchentable", nullptr, "kitchen", 1, 1},
        {"sit", "kitchentable", nullptr, "kitchen", 8, 15},
        {"standup", nullptr, nullptr, "kitchen", 0, 0}}},
      {"wash_dishes", 450, 10, 0.7, dishes_steps()},
      {"leave_home", 490, 20, 0.7,
       {{"walk", "@", nullptr, "livingroom", 1, 1},
        {"grab", "keys", nullptr, "livingroom", 0, 1},
        {"walk", "frontdoor", nullptr, "livingroom", 1, 1},
        {"open", "frontdoor", nullptr, "livingroom", 0, 0},
        {"close", "frontdoor", nullptr, "livingroom", 0, 0},
        {"lookat", "frontdoor", nullptr, "livingroom", 90, 240},
        {"open", "frontdoor", nullptr, "livingroom", 0, 0},
        {"close", "frontdoor", nullptr, "livingroom", 0, 0},
        {"walk", "sofa", nullptr, "livingroom", 1, 1},
        {"put", "keys", "sofa", "livingroom", 0, 0}}},
      {"work", 570, 20, 0.8,
       {{"walk", "@", nullptr, "office", 1, 1},
        {"walk", "desk", nullptr, "office", 1, 1},
        {"sit", "chair", nullptr, "office", 0, 0},
        {"switchon", "computer", nullptr, "office", 0, 0},
        {"lookat", "computer", nullptr, "office", 45, 120},
        {"switchoff", "computer", nullptr, "office", 0, 0},
        {"standup", nullptr, nullptr, "office", 0, 0}}},
      {"cooking", 735, 15, 0.9, cooking_steps()},
      {"laundry", 840, 30, 0.5,
       {{"walk", "@", nullptr, "bedroom", 1, 1},
        {"open", "wardrobe", nullptr, "bedroom", 0, 0},
        {"grab", "clothes", nullptr, "bedroom", 0, 1},
        {"close", "wardrobe", nullptr, "bedroom", 0, 0},
        {"walk", "@", nullptr, "bathroom", 1, 1},
        {"walk", "washingmachine", nullptr, "bathroom", 1, 1},
        {"open", "washingmachine", nullptr, "bathroom", 0, 0},
        {"put", "clothes", "washingmachine", "bathroom", 0, 0},
        {"close", "washingmachine", nullptr, "bathroom", 0, 0},
        {"switchon", "washingmachine", nullptr, "bathroom", 0, 1}}},
      {"reading", 930, 30, 0.7,
       {{"walk", "@", nullptr, "livingroom", 1, 1},
        {"walk", "bookshelf", nullptr, "livingroom", 1, 1},
        {"grab", "book", nullptr, "livingroom", 0, 0},
        {"walk", "sofa", nullptr, "livingroom", 1, 1},
        {"sit", "sofa", nullptr, "livingroom", 0, 0},
        {"lookat", "book", nullptr, "livingroom", 20, 50},
        {"standup", nullptr, nullptr, "livingroom", 0, 0},
        {"walk", "bookshelf", nullptr, "livingroom", 1, 1},
        {"put", "book", "bookshelf", "livingroom", 0, 0}}},
      {"cooking", 1095, 20, 1.0, cooking_steps()},
      {"wash_dishes", 1140, 10, 0.9, dishes_steps()},
      {"watch_tv", 1185, 20, 0.85,
       {{"walk", "@", nullptr, "livingroom", 1, 1},
        {"walk", "sofa", nullptr, "livingroom", 1, 1},
        {"grab", "remotecontrol", nullptr, "livingroom", 0, 0},
        {"sit", "sofa", nullptr, "livingroom", 0, 0},
        {"switchon", "tv", nullptr, "livingroom", 0, 0},
        {"lookat", "tv", nullptr, "livingroom", 30, 90},
        {"switchoff", "tv", nullptr, "livingroom", 0, 0},
        {"put", "remotecontrol", "sofa", "livingroom", 0, 0},
        {"standup", nullptr, nullptr, "livingroom", 0, 0}}},
      {"brushing_teeth", 1310, 10, 1.0, brushing_steps()},
      {"sleeping", 1340, 15, 1.0,
       {{"walk", "@", nullptr, "bedroom", 1, 1},
        {"switchon", "lightswitch", nullptr, "bedroom", 0, 0},
        {"open", "wardrobe", nullptr, "bedroom", 0, 0},
        {"close", "wardrobe", nullptr, "bedroom", 1, 1},
        {"walk", "bed", nullptr, "bedroom", 1, 1},
        {"switchoff", "lightswitch", nullptr, "bedroom", 0, 0},
        {"sit", "bed", nullptr, "bedroom", kUntilDayEnd, kUntilDayEnd}}},
  };
  return all;
}

const std::map<std::string, std::vector<std::string>>& role_aliases() {
  static const std::map<std::string, std::vector<std::string>> aliases{
      {"bedroom", {"bedroom", "sleeping", "masterbed"}},
      {"bathroom", {"bathroom", "washroom", "restroom", "toilet", "bath"}},
      {"kitchen", {"kitchen", "kitchenette", "galley", "cook"}},
      {"livingroom", {"livingroom", "living", "lounge", "sittingroom", "den", "family"}},
      {"office", {"office", "study", "workroom"}},
  };
  return aliases;
}

std::string display_name(std::string_view activity, std::uint64_t& rng) {
  std::string s(activity);
  std::replace(s.begin(), s.end(), '_', ' ');
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  // Chat models are inconsistent about capitalization.
  if (uniform_below(rng, 5) == 0) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i - 1] == ' ') s[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[i])));
    }
  }
  return s;
}

std::string styled_verb(std::string_view verb, std::uint64_t& rng) {
  static const std::map<std::string, std::string, std::less<>> split{
      {"switchon", "switch_on"}, {"switchoff", "switch_off"},
      {"standup", "stand_up"},   {"lookat", "look_at"}};
  const auto roll = uniform_below(rng, 10);
  if (roll == 0) {
    if (auto it = split.find(verb); it != split.end()) return it->second;
  }
  std::string out(verb);
  if (roll == 1) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

int draw(std::uint64_t& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace

std::map<std::string, std::string> infer_room_roles(const env::HomeLayout& layout) {
  std::map<std::string, std::string> roles;
  for (const char* role : kRoles) {
    if (layout.find_room(role)) {
      roles[role] = role;
      continue;
    }
    for (const auto& alias : role_aliases().at(role)) {
      for (const auto& room : layout.rooms) {
        if (to_lower(room.name).find(alias) != std::string::npos) {
          roles[role] = room.name;
          break;
        }
      }
      if (roles.count(role)) break;
    }
  }
  if (!roles.count("office") && roles.count("livingroom")) roles["office"] = roles["livingroom"];
  return roles;
}

const std::vector<std::string>& activity_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& t : templates()) {
      if (std::find(out.begin(), out.end(), t.name) == out.end()) out.emplace_back(t.name);
    }
    return out;
  }();
  return names;
}

std::string synthesize_day(const env::HomeLayout& layout, const DaySpec& spec) {
  const auto roles = infer_room_roles(layout);
  for (const char* role : kRoles) {
    if (!roles.count(role)) {
      throw CorpusError("layout '" + layout.name + "' has no room for role '" + role + "'");
    }
  }
  std::set<std::pair<std::string, std::string>> present;  // (room, class)
  for (const auto& o : layout.graph.nodes()) present.emplace(o.room, o.class_name);

  std::uint64_t rng = spec.seed ^ fnv1a64(layout.name) ^
                      (static_cast<std::uint64_t>(spec.day_number) * 0x9e3779b97f4a7c15ULL);
  const bool header_as_label = uniform_below(rng, 3) == 0;
  const auto prefix_style = uniform_below(rng, 4);

  std::ostringstream out;
  out << "Day " << spec.day_number << " - " << spec.persona << "\n";
  out << "Here is the detailed schedule for the day:\n\n";

  int cursor = 0;
  for (const auto& activity : templates()) {
    const bool included = static_cast<double>(uniform_below(rng, 1000)) <
                          activity.probability * 1000.0;
    if (!included) continue;
    int t = std::max(cursor, activity.planned_start + draw(rng, -activity.jitter, activity.jitter));
    if (t >= kLastMinute) break;

    struct Line {
      std::string verb;
      std::vector<std::string> objects;
      int start, end;
      std::string room;
    };
    std::vector<Line> lines;
    std::set<std::string> held;
    for (const auto& st : activity.steps) {
      const std::string& room = roles.at(st.role);
      Line line{st.verb, {}, t, t, room};
      if (st.object) {
        const std::string obj = std::string(st.object) == "@" ? room : st.object;
        if (std::string(st.object) != "@" && !present.count({room, obj})) continue;
        line.objects.push_back(obj);
      }
      if (st.target) {
        if (!held.count(st.object) || !present.count({room, st.target})) continue;
        line.objects.emplace_back(st.target);
        held.erase(st.object);
      }
      if (line.verb == "grab") held.insert(line.objects.front());
      const int minutes = st.min_minutes == kUntilDayEnd ? kLastMinute - t
                                                         : draw(rng, st.min_minutes, st.max_minutes);
      line.end = std::min(kLastMinute, t + minutes);
      t = line.end;
      lines.push_back(std::move(line));
      if (t >= kLastMinute) break;
    }
    if (lines.empty()) continue;
    cursor = t;

    const auto name = display_name(activity.name, rng);
    const script::TimeOfDay a_start{lines.front().start / 60, lines.front().start % 60};
    const script::TimeOfDay a_end{lines.back().end / 60, lines.back().end % 60};
    if (header_as_label) {
      out << "Activity: " << name << "\n";
    } else {
      out << name << " (" << script::format_time(a_start) << " - " << script::format_time(a_end)
          << ") (" << lines.front().room << ")\n";
    }
    int n = 1;
    for (const auto& line : lines) {
      switch (prefix_style) {
        case 1: out << n << ". "; break;
        case 2: out << "- "; break;
        case 3: out << "Step " << n << ": "; break;
        default: break;
      }
      ++n;
      out << "[" << styled_verb(line.verb, rng) << "]";
      for (const auto& o : line.objects) out << " <" << o << ">";
      // Long commands sometimes wrap before the time interval.
      out << (uniform_below(rng, 6) == 0 ? " \n" : " ");
      out << "(" << script::format_time({line.start / 60, line.start % 60}) << " - "
          << script::format_time({line.end / 60, line.end % 60}) << ") (" << line.room << ")\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ambisim::corpus
