#pragma once

// Reference checks used by the tests. Everything here is written from first
// principles and shares no geometry or graph code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scenesmith/scenesmith.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Dataset table: assets x sequences per task, in table order.

struct TableRow {
  const char* template_id;
  int n_assets;
  int n_sequences;
};

inline constexpr std::array<TableRow, 18> kDatasetTable = {{
    {"pick_place_into_bowl", 10, 10},
    {"pick_place_into_appliance", 30, 10},
    {"pick_out_of_bowl", 10, 10},
    {"pick_out_of_appliance", 30, 10},
    {"open_close_room_door", 10, 20},
    {"open_close_furniture_door", 30, 20},
    {"push_pull_drawer", 10, 20},
    {"push_button", 10, 20},
    {"push_object_on_table", 10, 10},
    {"organize_books", 10, 50},
    {"serve_drinks", 5, 30},
    {"clean_table", 10, 50},
    {"make_bed", 10, 50},
    {"hang_clothes", 10, 50},
    {"set_alarm", 5, 30},
    {"store_dish_in_fridge", 5, 30},
    {"heat_food", 5, 50},
    {"clean_dishes", 5, 50},
}};

// Row products, summed by hand from the table before any code existed:
// 100 + 300 + 100 + 300 + 200 + 600 + 200 + 200 + 100
// + 500 + 150 + 500 + 500 + 500 + 150 + 150 + 250 + 250.
inline constexpr std::array<int, 18> kRowTotals = {100, 300, 100, 300, 200, 600, 200, 200, 100,
                                                   500, 150, 500, 500, 500, 150, 150, 250, 250};
inline constexpr int kGrandTotal = 5050;

// ---------------------------------------------------------------------------
// Plain 2D geometry

using P = std::pair<double, double>;

inline std::vector<P> points(const scenesmith::Polygon& poly) {
  std::vector<P> out;
  for (const auto& v : poly) out.emplace_back(v.x, v.y);
  return out;
}

// Even-odd ray casting.
inline bool inside(const std::vector<P>& poly, P q) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto [xi, yi] = poly[i];
    const auto [xj, yj] = poly[j];
    if ((yi > q.second) != (yj > q.second)) {
      const double x = xj + (q.second - yj) * (xi - xj) / (yi - yj);
      if (q.first < x) in = !in;
    }
  }
  return in;
}

// Intersection area of two axis-aligned (rectilinear) polygons by
// compressing coordinates and testing each elementary cell's centre.
inline double rectilinear_intersection_area(const std::vector<P>& a, const std::vector<P>& b) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto* poly : {&a, &b}) {
    for (const auto& [x, y] : *poly) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const P c{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      if (inside(a, c) && inside(b, c)) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  }
  return area;
}

// Exact shoelace area on integer grid units.
inline double grid_area(const std::vector<P>& poly, double resolution) {
  std::int64_t twice = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [x0, y0] = poly[i];
    const auto& [x1, y1] = poly[(i + 1) % n];
    const auto X0 = std::llround(x0 / resolution);
    const auto Y0 = std::llround(y0 / resolution);
    const auto X1 = std::llround(x1 / resolution);
    const auto Y1 = std::llround(y1 / resolution);
    twice += X0 * Y1 - X1 * Y0;
  }
  return std::abs(static_cast<double>(twice)) * 0.5 * resolution * resolution;
}

struct Box {
  double x0, y0, x1, y1;
};

inline Box bbox(const std::vector<P>& poly) {
  Box b{1e300, 1e300, -1e300, -1e300};
  for (const auto& [x, y] : poly) {
    b.x0 = std::min(b.x0, x);
    b.y0 = std::min(b.y0, y);
    b.x1 = std::max(b.x1, x);
    b.y1 = std::max(b.y1, y);
  }
  return b;
}

// Corners of a yaw-rotated rectangle.
inline std::array<P, 4> rect_corners(double cx, double cy, double hx, double hy, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  std::array<P, 4> out{};
  const double sx[4] = {-1, 1, 1, -1};
  const double sy[4] = {-1, -1, 1, 1};
  for (int k = 0; k < 4; ++k) {
    const double lx = sx[k] * hx;
    const double ly = sy[k] * hy;
    out[static_cast<std::size_t>(k)] = {cx + c * lx - s * ly, cy + s * lx + c * ly};
  }
  return out;
}

inline std::array<P, 4> footprint(const scenesmith::PlacedAsset& p) {
  return rect_corners(p.pose.position.x, p.pose.position.y, 0.5 * p.size.x, 0.5 * p.size.y, p.pose.yaw);
}

// Smallest overlap of the two projections over the four edge normals;
// positive means the rectangles interpenetrate by that depth.
inline double sat_depth(const std::array<P, 4>& a, const std::array<P, 4>& b) {
  double depth = 1e300;
  for (const auto* r : {&a, &b}) {
    for (int k = 0; k < 2; ++k) {
      const P e{(*r)[static_cast<std::size_t>(k + 1)].first - (*r)[static_cast<std::size_t>(k)].first,
                (*r)[static_cast<std::size_t>(k + 1)].second - (*r)[static_cast<std::size_t>(k)].second};
      const double len = std::hypot(e.first, e.second);
      const P n{-e.second / len, e.first / len};
      double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
      for (const auto& q : a) {
        const double d = q.first * n.first + q.second * n.second;
        amin = std::min(amin, d);
        amax = std::max(amax, d);
      }
      for (const auto& q : b) {
        const double d = q.first * n.first + q.second * n.second;
        bmin = std::min(bmin, d);
        bmax = std::max(bmax, d);
      }
      depth = std::min(depth, std::min(amax, bmax) - std::max(amin, bmin));
    }
  }
  return depth;
}

// ---------------------------------------------------------------------------
// Scene checks

// Breadth-first search over rooms joined by interior openings and stairs.
inline bool connected(const scenesmith::FloorPlan& plan) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& f : plan.floors) {
    for (const auto& r : f.rooms) adj[r.room_id];
  }
  auto link = [&](const std::string& a, const std::string& b) {
    if (!adj.count(a) || !adj.count(b)) return;
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const auto& f : plan.floors) {
    for (const auto& o : f.openings) link(o.room_a, o.room_b);
  }
  for (const auto& s : plan.staircases) link(s.lower_room, s.upper_room);
  if (adj.empty()) return false;
  std::set<std::string> seen{adj.begin()->first};
  std::queue<std::string> q;
  q.push(adj.begin()->first);
  while (!q.empty()) {
    const std::string cur = q.front();
    q.pop();
    for (const auto& n : adj[cur]) {
      if (seen.insert(n).second) q.push(n);
    }
  }
  return seen.size() == adj.size();
}

// Interior overlap area summed over room pairs on each floor.
inline double room_overlap(const scenesmith::FloorPlan& plan) {
  double total = 0.0;
  for (const auto& f : plan.floors) {
    for (std::size_t i = 0; i < f.rooms.size(); ++i) {
      for (std::size_t j = i + 1; j < f.rooms.size(); ++j) {
        total += rectilinear_intersection_area(points(f.rooms[i].interior), points(f.rooms[j].interior));
      }
    }
  }
  return total;
}

struct RoomShape {
  double aspect;
  double fill;
  double area;
};

inline RoomShape room_shape(const scenesmith::Room& room, double resolution) {
  const auto pts = points(room.polygon);
  const Box b = bbox(pts);
  const double w = b.x1 - b.x0;
  const double h = b.y1 - b.y0;
  const double area = grid_area(pts, resolution);
  return {std::max(w, h) / std::min(w, h), area / (w * h), area};
}

inline bool within_thresholds(const scenesmith::Room& room, const scenesmith::LayoutSpec& spec) {
  const RoomShape s = room_shape(room, spec.grid_resolution);
  const auto& t = spec.thresholds;
  return s.aspect <= t.max_aspect_ratio + 1e-9 && s.fill >= t.min_fill_ratio - 1e-9 &&
         s.area >= t.min_room_area.at(room.room_type) - 1e-9;
}

inline bool descends_from(const scenesmith::SceneGraph& scene, const scenesmith::PlacedAsset& p,
                          const std::string& ancestor) {
  std::set<std::string> seen;
  std::string cur = p.parent;
  while (seen.insert(cur).second) {
    const scenesmith::PlacedAsset* q = scene.find(cur);
    if (!q) return false;
    if (q->instance_id == ancestor) return true;
    cur = q->parent;
  }
  return false;
}

// Pairs of assets whose footprints interpenetrate by more than `tol` while
// their height intervals also overlap. Stacked or contained pairs are exempt.
inline std::vector<std::pair<std::string, std::string>> collision_pairs(const scenesmith::SceneGraph& scene,
                                                                       double tol = 1e-3) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& v = scene.placed;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const auto& a = v[i];
      const auto& b = v[j];
      if (a.floor_index != b.floor_index) continue;
      if (descends_from(scene, a, b.instance_id) || descends_from(scene, b, a.instance_id)) continue;
      const double z = std::min(a.pose.position.z + a.size.z, b.pose.position.z + b.size.z) -
                       std::max(a.pose.position.z, b.pose.position.z);
      if (z <= tol) continue;
      if (sat_depth(footprint(a), footprint(b)) > tol) out.emplace_back(a.instance_id, b.instance_id);
    }
  }
  return out;
}

// Footprint samples (corners pulled in by `tol`, plus an interior lattice)
// must all lie inside the room's interior outline.
inline bool contained(const scenesmith::PlacedAsset& p, const scenesmith::Room& room, double tol = 1e-3) {
  const auto poly = points(room.interior);
  const double hx = std::max(0.5 * p.size.x - tol, 0.0);
  const double hy = std::max(0.5 * p.size.y - tol, 0.0);
  const double c = std::cos(p.pose.yaw);
  const double s = std::sin(p.pose.yaw);
  constexpr int kSteps = 6;
  for (int i = 0; i <= kSteps; ++i) {
    for (int j = 0; j <= kSteps; ++j) {
      const double lx = -hx + 2.0 * hx * i / kSteps;
      const double ly = -hy + 2.0 * hy * j / kSteps;
      const P q{p.pose.position.x + c * lx - s * ly, p.pose.position.y + s * lx + c * ly};
      if (!inside(poly, q)) return false;
    }
  }
  return true;
}

// True when following parents from any asset revisits an asset, or a parent
// instance appears later in the placement order.
inline bool support_cycle(const scenesmith::SceneGraph& scene) {
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < scene.placed.size(); ++i) order[scene.placed[i].instance_id] = i;
  for (std::size_t i = 0; i < scene.placed.size(); ++i) {
    auto it = order.find(scene.placed[i].parent);
    if (it != order.end() && it->second >= i) return true;
    std::set<std::string> seen{scene.placed[i].instance_id};
    std::string cur = scene.placed[i].parent;
    while (order.count(cur)) {
      if (!seen.insert(cur).second) return true;
      cur = scene.placed[order[cur]].parent;
    }
  }
  return false;
}

// Surface kinds exposed by a placed instance.
inline std::set<scenesmith::SurfaceKind> surface_kinds(const scenesmith::SceneGraph& scene, const std::string& owner) {
  std::set<scenesmith::SurfaceKind> out;
  for (const auto& s : scene.surfaces) {
    if (s.owner == owner) out.insert(s.kind);
  }
  return out;
}

// Semantic placement rules: food rests on dining surfaces or inside a
// container, pillows rest on a bed top, surface-only items never stand on
// the floor and floor-only items never rest on other assets.
inline std::vector<std::string> semantic_violations(const scenesmith::SceneGraph& scene,
                                                    const scenesmith::Catalog& catalog) {
  using scenesmith::SupportKind;
  using scenesmith::SurfaceKind;
  std::vector<std::string> out;
  for (const auto& p : scene.placed) {
    const auto* a = catalog.find(p.asset_id);
    if (!a) {
      out.push_back(p.instance_id + ": unknown asset");
      continue;
    }
    const auto kinds = surface_kinds(scene, p.parent);
    auto parent_has = [&](std::initializer_list<SurfaceKind> allowed) {
      return std::any_of(allowed.begin(), allowed.end(), [&](SurfaceKind k) { return kinds.count(k) > 0; });
    };
    if (a->subtype == scenesmith::Subtype::kFood) {
      const bool ok = (p.support_kind == SupportKind::kSurface &&
                       parent_has({SurfaceKind::kTabletop, SurfaceKind::kCounter})) ||
                      (p.support_kind == SupportKind::kInside && parent_has({SurfaceKind::kInterior}));
      if (!ok) out.push_back(p.instance_id + ": food not on a dining surface");
    }
    if (a->object_class == "pillow" &&
        !(p.support_kind == SupportKind::kBed && parent_has({SurfaceKind::kBedTop}))) {
      out.push_back(p.instance_id + ": pillow not on a bed top");
    }
    using scenesmith::PlacementTag;
    const auto& tags = a->placement_tags;
    const bool floor_only = tags.size() == 1 && tags.count(PlacementTag::kOnFloor);
    const bool surface_only = tags.count(PlacementTag::kOnSurface) && !tags.count(PlacementTag::kOnFloor) &&
                              !tags.count(PlacementTag::kWallMounted);
    if (floor_only && p.support_kind != SupportKind::kFloor) {
      out.push_back(p.instance_id + ": floor-only asset off the floor");
    }
    if (surface_only && p.support_kind == SupportKind::kFloor) {
      out.push_back(p.instance_id + ": surface asset on the floor");
    }
  }
  for (const auto& r : catalog.rules()) {
    if (r.relation != scenesmith::Relation::kExcludes) continue;
    std::set<std::string> subject_rooms;
    std::set<std::string> object_rooms;
    for (const auto& p : scene.placed) {
      const auto* a = catalog.find(p.asset_id);
      if (!a) continue;
      if (scenesmith::reference_matches(*a, r.subject)) subject_rooms.insert(p.room_id);
      if (scenesmith::reference_matches(*a, r.object)) object_rooms.insert(p.room_id);
    }
    for (const auto& room : subject_rooms) {
      if (object_rooms.count(room)) out.push_back("excludes rule violated in " + room);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

struct Moments {
  std::size_t n = 0;
  double sum = 0.0;
  double lo = 1e300;
  double hi = -1e300;

  void add(double v) {
    ++n;
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
