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
#include <deque>

#include "ambisim/sim.hpp"

namespace ambisim::sim {

namespace {

constexpr double kWallTol = 1e-6;

struct Portal {
  bool adjacent = false;
  bool door = false;
  env::Vec3 point;
};

// Midpoint of the shared wall segment when two footprints touch.
std::optional<env::Vec3> shared_wall_midpoint(const env::Room& a, const env::Room& b, double y) {
  const double oz0 = std::max(a.bbox_min.z, b.bbox_min.z), oz1 = std::min(a.bbox_max.z, b.bbox_max.z);
  const double ox0 = std::max(a.bbox_min.x, b.bbox_min.x), ox1 = std::min(a.bbox_max.x, b.bbox_max.x);
  if (oz1 - oz0 > kWallTol) {
    if (std::abs(a.bbox_max.x - b.bbox_min.x) <= kWallTol) return env::Vec3{a.bbox_max.x, y, 0.5 * (oz0 + oz1)};
    if (std::abs(b.bbox_max.x - a.bbox_min.x) <= kWallTol) return env::Vec3{a.bbox_min.x, y, 0.5 * (oz0 + oz1)};
  }
  if (ox1 - ox0 > kWallTol) {
    if (std::abs(a.bbox_max.z - b.bbox_min.z) <= kWallTol) return env::Vec3{0.5 * (ox0 + ox1), y, a.bbox_max.z};
    if (std::abs(b.bbox_max.z - a.bbox_min.z) <= kWallTol) return env::Vec3{0.5 * (ox0 + ox1), y, a.bbox_min.z};
  }
  return std::nullopt;
}

Portal portal_between(const env::HomeLayout& layout, std::size_t a, std::size_t b, double y) {
  const auto& ra = layout.rooms[a];
  const auto& rb = layout.rooms[b];
  for (const auto& d : layout.doors) {
    if ((d.room_a == ra.name && d.room_b == rb.name) || (d.room_a == rb.name && d.room_b == ra.name)) {
      return {true, true, env::Vec3{d.anchor.x, y, d.anchor.z}};
    }
  }
  if (auto mid = shared_wall_midpoint(ra, rb, y)) return {true, false, *mid};
  return {};
}

}  // namespace

std::vector<env::Vec3> plan_path(const env::HomeLayout& layout, const env::Vec3& from,
                                 const env::Vec3& to, std::string_view from_room,
                                 std::string_view to_room) {
  const auto src = layout.room_index(from_room);
  const auto dst = layout.room_index(to_room);
  if (!src) throw SimError("plan_path: unknown room '" + std::string(from_room) + "'");
  if (!dst) throw SimError("plan_path: unknown room '" + std::string(to_room) + "'");
  if (from == to) return {from};
  if (*src == *dst) return {from, to};

  const double y = layout.floor_height();
  const std::size_t n = layout.rooms.size();
  std::vector<std::vector<Portal>> portals(n, std::vector<Portal>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) portals[i][j] = portal_between(layout, i, j, y);
    }
  }

  std::vector<std::optional<std::size_t>> parent(n);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{*src};
  seen[*src] = true;
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    if (cur == *dst) break;
    for (std::size_t next = 0; next < n; ++next) {
      if (seen[next] || !portals[cur][next].adjacent) continue;
      seen[next] = true;
      parent[next] = cur;
      queue.push_back(next);
    }
  }
  if (!seen[*dst]) {
    throw SimError("no path from room '" + std::string(from_room) + "' to room '" +
                   std::string(to_room) + "'");
  }

  std::vector<std::size_t> rooms{*dst};
  while (rooms.back() != *src) rooms.push_back(*parent[rooms.back()]);
  std::reverse(rooms.begin(), rooms.end());

  const bool via_centroids = layout.doors.empty();
  std::vector<env::Vec3> path{from};
  auto push = [&](const env::Vec3& p) {
    if (!(path.back() == p)) path.push_back(p);
  };
  for (std::size_t k = 0; k + 1 < rooms.size(); ++k) {
    push(portals[rooms[k]][rooms[k + 1]].point);
    if (via_centroids && k + 2 < rooms.size()) push(layout.rooms[rooms[k + 1]].floor_centroid(y));
  }
  push(to);
  return path;
}

}  // namespace ambisim::sim
