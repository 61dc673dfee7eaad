#pragma once

// Rectilinear floorplan synthesis.
//
// A proposal partitions the footprint grid recursively (binary splits with
// jitter) into one rectangle per requested room, trims over-elongated
// rectangles, optionally carves corner notches, and offers every leftover
// region to an edge-adjacent neighbour (L-shape expansion). Proposals whose
// rooms miss the aspect/fill/area thresholds, or whose rooms cannot be
// joined by doors, are rejected and the next proposal stream is tried.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/enums.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/geometry.hpp"
#include "scenesmith/rng.hpp"

namespace scenesmith {

inline constexpr std::string_view kExterior = "EXTERIOR";

struct LayoutThresholds {
  double max_aspect_ratio = 2.5;
  double min_fill_ratio = 0.7;
  std::map<RoomType, double> min_room_area = {
      {RoomType::kLivingRoom, 12.0}, {RoomType::kKitchen, 6.0}, {RoomType::kBedroom, 9.0}};

  bool operator==(const LayoutThresholds&) const = default;
};

struct LayoutSpec {
  std::vector<RoomType> rooms_requested;
  int floors = 1;
  double width = 12.0;  // footprint x extent, meters
  double depth = 10.0;  // footprint y extent, meters
  double grid_resolution = 0.25;
  LayoutThresholds thresholds;
  double interior_wall_thickness = 0.10;
  double exterior_wall_thickness = 0.20;
  double floor_height = 2.8;
  int proposal_budget = 200;

  bool operator==(const LayoutSpec&) const = default;
};

struct Room {
  std::string room_id;
  RoomType room_type = RoomType::kLivingRoom;
  int floor_index = 0;
  Polygon polygon;   // wall centre lines, vertices on the grid
  Polygon interior;  // wall faces: polygon shrunk by half the adjacent wall thickness

  bool operator==(const Room&) const = default;
};

struct RoomScore {
  double aspect_ratio = 1.0;
  double fill_ratio = 1.0;

  bool operator==(const RoomScore&) const = default;
};

struct WallSegment {
  std::string wall_id;
  Vec2 a;
  Vec2 b;
  double thickness = 0.1;
  int floor_index = 0;
  WallKind kind = WallKind::kInterior;
  std::string room_a;  // lower room id
  std::string room_b;  // other room id, or EXTERIOR

  bool operator==(const WallSegment&) const = default;
  double length() const { return scenesmith::length(b - a); }
  bool horizontal() const { return a.y == b.y; }
};

struct Opening {
  std::string opening_id;
  OpeningKind kind = OpeningKind::kDoor;
  std::string wall_id;
  int floor_index = 0;
  Vec2 center;
  double width = 0.9;
  double height = 2.1;
  std::string room_a;
  std::string room_b;  // room id, or EXTERIOR

  bool operator==(const Opening&) const = default;
};

struct Staircase {
  std::string staircase_id;
  Rect2 footprint;
  int lower_floor = 0;
  int upper_floor = 1;
  std::string lower_room;
  std::string upper_room;
  std::string run_direction;  // "+x", "-x", "+y" or "-y"

  bool operator==(const Staircase&) const = default;
};

struct FloorLevel {
  int index = 0;
  std::vector<Room> rooms;
  std::vector<WallSegment> walls;
  std::vector<Opening> openings;
  std::vector<Rect2> ceiling_cutouts;

  bool operator==(const FloorLevel&) const = default;
};

struct FloorPlan {
  LayoutSpec spec;
  std::vector<FloorLevel> floors;
  std::vector<Staircase> staircases;
  std::map<std::string, RoomScore> metrics;
  std::uint64_t generation_seed = 0;
  int rejected_proposals = 0;

  bool operator==(const FloorPlan&) const = default;

  const Room* find_room(std::string_view id) const {
    for (const auto& f : floors) {
      for (const auto& r : f.rooms) {
        if (r.room_id == id) return &r;
      }
    }
    return nullptr;
  }
  const WallSegment* find_wall(std::string_view id) const {
    for (const auto& f : floors) {
      for (const auto& w : f.walls) {
        if (w.wall_id == id) return &w;
      }
    }
    return nullptr;
  }
  std::vector<const Room*> all_rooms() const {
    std::vector<const Room*> out;
    for (const auto& f : floors) {
      for (const auto& r : f.rooms) out.push_back(&r);
    }
    return out;
  }
  double elevation(int floor_index) const { return floor_index * spec.floor_height; }
};

inline std::string room_id_for(int floor, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "f%d_r%02d", floor, index);
  return buf;
}

inline void validate_spec(const LayoutSpec& spec) {
  if (spec.rooms_requested.empty()) throw InvalidSpec("rooms_requested must be non-empty");
  for (RoomType r : spec.rooms_requested) {
    if (r == RoomType::kAny) throw InvalidSpec("rooms_requested may not contain 'any'");
  }
  if (spec.floors < 1) throw InvalidSpec("floors must be >= 1");
  if (static_cast<int>(spec.rooms_requested.size()) < spec.floors) {
    throw InvalidSpec("each floor needs at least one requested room");
  }
  if (spec.width < 4.0 || spec.depth < 4.0) throw InvalidSpec("footprint must be at least 4 m x 4 m");
  if (!(spec.grid_resolution > 0.0)) throw InvalidSpec("grid_resolution must be positive");
  for (double d : {spec.width, spec.depth}) {
    const double cells = d / spec.grid_resolution;
    if (std::abs(cells - std::round(cells)) > 1e-9) {
      throw InvalidSpec("grid_resolution must divide the footprint dimensions");
    }
  }
  const auto& t = spec.thresholds;
  if (!(t.max_aspect_ratio > 0.0) || !(t.min_fill_ratio > 0.0)) {
    throw InvalidSpec("thresholds must be positive");
  }
  for (RoomType r : spec.rooms_requested) {
    auto it = t.min_room_area.find(r);
    if (it == t.min_room_area.end() || !(it->second > 0.0)) {
      throw InvalidSpec("min_room_area missing or non-positive for " + std::string(to_string(r)));
    }
  }
  if (!(spec.interior_wall_thickness > 0.0) || !(spec.exterior_wall_thickness > 0.0)) {
    throw InvalidSpec("wall thickness must be positive");
  }
  if (!(spec.floor_height > 0.0)) throw InvalidSpec("floor_height must be positive");
  if (spec.proposal_budget < 1) throw InvalidSpec("proposal_budget must be >= 1");
}

// ---------------------------------------------------------------------------
// Metrics

inline RoomScore score_polygon(const Polygon& poly) {
  const double area = polygon_area(poly);
  const Rect2 box = bounding_box(poly);
  if (poly.size() < 3 || !(area > 0.0) || !(box.width() > 0.0) || !(box.height() > 0.0)) {
    throw DegeneratePolygon("room polygon has zero area");
  }
  const double lo = std::min(box.width(), box.height());
  const double hi = std::max(box.width(), box.height());
  return {hi / lo, area / box.area()};
}

inline RoomScore score_room(const Room& room) { return score_polygon(room.polygon); }

inline bool passes_thresholds(const RoomScore& s, double area, RoomType type,
                              const LayoutThresholds& t) {
  constexpr double kEps = 1e-9;
  auto it = t.min_room_area.find(type);
  const double min_area = it == t.min_room_area.end() ? 0.0 : it->second;
  return s.aspect_ratio <= t.max_aspect_ratio + kEps && s.fill_ratio >= t.min_fill_ratio - kEps &&
         area >= min_area - kEps;
}

inline bool passes_thresholds(const Room& room, const LayoutThresholds& t) {
  return passes_thresholds(score_room(room), polygon_area(room.polygon), room.room_type, t);
}

// ---------------------------------------------------------------------------
// Cell drafts

struct CellRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open cell ranges

  int w() const { return x1 - x0; }
  int h() const { return y1 - y0; }
  int cells() const { return w() * h(); }
  bool contains(int i, int j) const { return i >= x0 && i < x1 && j >= y0 && j < y1; }
};

// Per-floor grid ownership while a proposal is being built.
struct LayoutDraft {
  static constexpr int kOutside = -1;   // void, outside the built footprint
  static constexpr int kLeftover = -2;  // unassigned leftover region
  static constexpr int kUnusable = -3;  // leftover nobody could absorb

  int nx = 0;
  int ny = 0;
  double resolution = 0.25;
  int floor_index = 0;
  std::vector<int> owner;  // room index per cell, or a negative marker
  std::vector<RoomType> room_types;
  LayoutThresholds thresholds;

  LayoutDraft() = default;
  LayoutDraft(int nx_, int ny_, double res, int floor)
      : nx(nx_), ny(ny_), resolution(res), floor_index(floor),
        owner(static_cast<std::size_t>(nx_ * ny_), kOutside) {}

  int at(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return kOutside;
    return owner[static_cast<std::size_t>(j * nx + i)];
  }
  void set(int i, int j, int v) { owner[static_cast<std::size_t>(j * nx + i)] = v; }
  bool is_room(int i, int j) const { return at(i, j) >= 0; }
  std::string room_id(int index) const { return room_id_for(floor_index, index); }
  int room_index(std::string_view id) const {
    for (int k = 0; k < static_cast<int>(room_types.size()); ++k) {
      if (room_id(k) == id) return k;
    }
    return -1;
  }
  int cell_count(int room) const {
    return static_cast<int>(std::count(owner.begin(), owner.end(), room));
  }
};

namespace layout_detail {

struct UnitEdge {
  int x0, y0, x1, y1;
  double offset;
};

// Directed boundary loops (interior on the left) of the cells selected by
// `inside`. Sets `pinched` when a vertex has two outgoing edges.
template <typename Inside, typename Offset>
std::vector<std::vector<UnitEdge>> boundary_loops(int nx, int ny, Inside inside, Offset offset,
                                                  bool* pinched) {
  std::map<std::pair<int, int>, std::vector<UnitEdge>> out_edges;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!inside(i, j)) continue;
      if (!inside(i, j - 1)) out_edges[{i, j}].push_back({i, j, i + 1, j, offset(i, j, i, j - 1)});
      if (!inside(i + 1, j))
        out_edges[{i + 1, j}].push_back({i + 1, j, i + 1, j + 1, offset(i, j, i + 1, j)});
      if (!inside(i, j + 1))
        out_edges[{i + 1, j + 1}].push_back({i + 1, j + 1, i, j + 1, offset(i, j, i, j + 1)});
      if (!inside(i - 1, j)) out_edges[{i, j + 1}].push_back({i, j + 1, i, j, offset(i, j, i - 1, j)});
    }
  }
  if (pinched) *pinched = false;
  for (const auto& [v, list] : out_edges) {
    if (list.size() > 1 && pinched) *pinched = true;
  }
  std::vector<std::vector<UnitEdge>> loops;
  while (!out_edges.empty()) {
    auto it = out_edges.begin();
    std::vector<UnitEdge> loop;
    std::pair<int, int> start = it->first;
    std::pair<int, int> cur = start;
    while (true) {
      auto found = out_edges.find(cur);
      if (found == out_edges.end()) break;
      UnitEdge e = found->second.back();
      found->second.pop_back();
      if (found->second.empty()) out_edges.erase(found);
      loop.push_back(e);
      cur = {e.x1, e.y1};
      if (cur == start) break;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

inline Vec2 left_normal(const UnitEdge& e) {
  const int dx = e.x1 - e.x0;
  const int dy = e.y1 - e.y0;
  return {static_cast<double>(-dy), static_cast<double>(dx)};
}

// Collapses unit edges into corner vertices, optionally offsetting every
// edge inward by its own distance (per-run offsets produce small jogs where
// the wall kind changes along a straight side).
inline Polygon loop_to_polygon(const std::vector<UnitEdge>& loop, double res, bool apply_offset) {
  struct Run {
    UnitEdge first;
    UnitEdge last;
  };
  std::vector<Run> runs;
  for (const UnitEdge& e : loop) {
    if (!runs.empty()) {
      Run& r = runs.back();
      const bool same_dir = (e.x1 - e.x0) == (r.last.x1 - r.last.x0) &&
                            (e.y1 - e.y0) == (r.last.y1 - r.last.y0);
      if (same_dir && (!apply_offset || e.offset == r.last.offset)) {
        r.last = e;
        continue;
      }
    }
    runs.push_back({e, e});
  }
  if (runs.size() > 1) {
    Run& a = runs.front();
    const Run& b = runs.back();
    const bool same_dir = (a.first.x1 - a.first.x0) == (b.last.x1 - b.last.x0) &&
                          (a.first.y1 - a.first.y0) == (b.last.y1 - b.last.y0);
    if (same_dir && (!apply_offset || a.first.offset == b.last.offset)) {
      a.first = b.first;
      runs.pop_back();
    }
  }
  Polygon poly;
  const std::size_t n = runs.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Run& r1 = runs[k];
    const Run& r2 = runs[(k + 1) % n];
    const Vec2 p{r1.last.x1 * res, r1.last.y1 * res};
    if (!apply_offset) {
      poly.push_back(p);
      continue;
    }
    const Vec2 n1 = left_normal(r1.last);
    const Vec2 n2 = left_normal(r2.first);
    const double d1 = r1.last.offset;
    const double d2 = r2.first.offset;
    if (n1 == n2) {
      poly.push_back(p + n1 * d1);
      poly.push_back(p + n2 * d2);
    } else {
      poly.push_back(p + n1 * d1 + n2 * d2);
    }
  }
  // Start at the lowest-left vertex so equal regions give equal vertex lists.
  if (!poly.empty()) {
    auto lowest = std::min_element(poly.begin(), poly.end(), [](Vec2 a, Vec2 b) {
      return a.y < b.y || (a.y == b.y && a.x < b.x);
    });
    std::rotate(poly.begin(), lowest, poly.end());
  }
  return poly;
}

}  // namespace layout_detail

// Centre-line polygon of a cell set; nullopt when it is not one simple loop.
template <typename Inside>
std::optional<Polygon> cells_polygon(int nx, int ny, double res, Inside inside) {
  bool pinched = false;
  auto loops = layout_detail::boundary_loops(
      nx, ny, inside, [](int, int, int, int) { return 0.0; }, &pinched);
  if (loops.size() != 1 || pinched) return std::nullopt;
  return layout_detail::loop_to_polygon(loops.front(), res, false);
}

inline std::optional<Polygon> room_polygon(const LayoutDraft& d, int room) {
  return cells_polygon(d.nx, d.ny, d.resolution, [&](int i, int j) { return d.at(i, j) == room; });
}

inline Polygon room_interior(const LayoutDraft& d, int room, double interior_half,
                             double exterior_half) {
  auto inside = [&](int i, int j) { return d.at(i, j) == room; };
  auto offset = [&](int, int, int ni, int nj) {
    return d.is_room(ni, nj) ? interior_half : exterior_half;
  };
  auto loops = layout_detail::boundary_loops(d.nx, d.ny, inside, offset, nullptr);
  if (loops.empty()) return {};
  return layout_detail::loop_to_polygon(loops.front(), d.resolution, true);
}

inline Room make_room(const LayoutDraft& d, int room, double interior_half, double exterior_half) {
  Room r;
  r.room_id = d.room_id(room);
  r.room_type = d.room_types[static_cast<std::size_t>(room)];
  r.floor_index = d.floor_index;
  auto poly = room_polygon(d, room);
  if (!poly) throw DegeneratePolygon("room " + r.room_id + " is not a simple polygon");
  r.polygon = *poly;
  r.interior = room_interior(d, room, interior_half, exterior_half);
  return r;
}

inline bool region_adjacent(const LayoutDraft& d, int room, const CellRect& region) {
  for (int j = region.y0; j < region.y1; ++j) {
    for (int i = region.x0; i < region.x1; ++i) {
      if (d.at(i - 1, j) == room || d.at(i + 1, j) == room || d.at(i, j - 1) == room ||
          d.at(i, j + 1) == room) {
        return true;
      }
    }
  }
  return false;
}

// Score of `room` if it absorbed `region`; nullopt if the union is not simple.
inline std::optional<RoomScore> merged_score(const LayoutDraft& d, int room, const CellRect& region) {
  auto poly = cells_polygon(d.nx, d.ny, d.resolution, [&](int i, int j) {
    return d.at(i, j) == room || (region.contains(i, j) && !d.is_room(i, j));
  });
  if (!poly) return std::nullopt;
  return score_polygon(*poly);
}

// L-shape expansion: the room absorbs the leftover region only when the
// merged outline stays a simple rectilinear polygon with fill ratio at or
// above the threshold; otherwise the room is unchanged and the region is
// marked unusable. Cells already owned by another room are never taken.
inline Room expand_l_shape(LayoutDraft& draft, std::string_view room_id, const CellRect& region,
                           double interior_half = 0.05, double exterior_half = 0.10) {
  const int room = draft.room_index(room_id);
  if (room < 0) throw NotAdjacent("unknown room " + std::string(room_id));
  if (!region_adjacent(draft, room, region)) {
    throw NotAdjacent("region is not edge-adjacent to room " + std::string(room_id));
  }
  auto score = merged_score(draft, room, region);
  const bool accept = score && score->fill_ratio >= draft.thresholds.min_fill_ratio - 1e-9;
  for (int j = region.y0; j < region.y1; ++j) {
    for (int i = region.x0; i < region.x1; ++i) {
      if (draft.is_room(i, j)) continue;
      draft.set(i, j, accept ? room : LayoutDraft::kUnusable);
    }
  }
  return make_room(draft, room, interior_half, exterior_half);
}

// ---------------------------------------------------------------------------
// Doors and connectivity helpers

inline constexpr double kDoorWidth = 0.9;
inline constexpr double kExteriorDoorWidth = 1.0;
inline constexpr double kDoorHeight = 2.1;
inline constexpr double kDoorEndMargin = 0.25;

// Region swept by a door leaf on both sides of its wall.
inline Rect2 door_clearance(const Opening& o, bool horizontal_wall) {
  const double h = o.width * 0.5;
  if (horizontal_wall) {
    return {{o.center.x - h, o.center.y - o.width}, {o.center.x + h, o.center.y + o.width}};
  }
  return {{o.center.x - o.width, o.center.y - h}, {o.center.x + o.width, o.center.y + h}};
}

inline bool rects_overlap(const Rect2& a, const Rect2& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Rooms across all floors joined by interior doors and staircases.
inline bool check_connectivity(const FloorPlan& plan) {
  std::map<std::string, std::size_t> index;
  for (const Room* r : plan.all_rooms()) index.emplace(r->room_id, index.size());
  if (index.size() <= 1) return true;
  UnionFind uf(index.size());
  auto join = [&](const std::string& a, const std::string& b) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia != index.end() && ib != index.end()) uf.unite(ia->second, ib->second);
  };
  for (const auto& f : plan.floors) {
    for (const auto& o : f.openings) {
      if (o.kind == OpeningKind::kDoor) join(o.room_a, o.room_b);
    }
  }
  for (const auto& s : plan.staircases) join(s.lower_room, s.upper_room);
  const std::size_t root = uf.find(0);
  for (std::size_t i = 1; i < index.size(); ++i) {
    if (uf.find(i) != root) return false;
  }
  return true;
}

namespace layout_detail {

struct Rejected {
  std::string reason;
};

inline int type_rank(RoomType t) { return static_cast<int>(t); }

inline void partition(const CellRect& r, const std::vector<int>& rooms,
                      const std::vector<double>& weights, Rng& rng, std::vector<CellRect>& leaves) {
  if (rooms.size() == 1) {
    leaves[static_cast<std::size_t>(rooms.front())] = r;
    return;
  }
  const std::size_t k = rooms.size() / 2;
  const std::vector<int> a(rooms.begin(), rooms.begin() + static_cast<std::ptrdiff_t>(k));
  const std::vector<int> b(rooms.begin() + static_cast<std::ptrdiff_t>(k), rooms.end());
  double wa = 0.0;
  double wt = 0.0;
  for (int i : a) wa += weights[static_cast<std::size_t>(i)];
  for (int i : rooms) wt += weights[static_cast<std::size_t>(i)];
  bool split_x;
  if (r.w() != r.h()) {
    split_x = r.w() > r.h();
  } else {
    split_x = rng.bernoulli(0.5);
  }
  const int len = split_x ? r.w() : r.h();
  if (len < 2) throw Rejected{"footprint too small to split"};
  const double jitter = rng.uniform(-0.1, 0.1) * len;
  int cut = static_cast<int>(std::lround(wa / wt * len + jitter));
  cut = std::clamp(cut, 1, len - 1);
  CellRect ra = r;
  CellRect rb = r;
  if (split_x) {
    ra.x1 = r.x0 + cut;
    rb.x0 = r.x0 + cut;
  } else {
    ra.y1 = r.y0 + cut;
    rb.y0 = r.y0 + cut;
  }
  partition(ra, a, weights, rng, leaves);
  partition(rb, b, weights, rng, leaves);
}

struct FloorBuild {
  LayoutDraft draft;
  FloorLevel level;
  std::vector<Rect2> door_zones;
};

inline void fill(LayoutDraft& d, const CellRect& r, int v) {
  for (int j = r.y0; j < r.y1; ++j) {
    for (int i = r.x0; i < r.x1; ++i) d.set(i, j, v);
  }
}

inline LayoutDraft propose_rooms(const LayoutSpec& spec, int floor, const std::vector<RoomType>& types,
                                 Rng& rng) {
  const int nx = static_cast<int>(std::lround(spec.width / spec.grid_resolution));
  const int ny = static_cast<int>(std::lround(spec.depth / spec.grid_resolution));
  LayoutDraft d(nx, ny, spec.grid_resolution, floor);
  d.thresholds = spec.thresholds;
  d.room_types = types;
  const int n = static_cast<int>(types.size());

  std::vector<double> weights;
  for (RoomType t : types) weights.push_back(spec.thresholds.min_room_area.at(t) * rng.uniform(0.8, 1.25));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<CellRect> leaves(static_cast<std::size_t>(n));
  partition({0, 0, nx, ny}, order, weights, rng, leaves);

  const double res = spec.grid_resolution;
  const double max_aspect = spec.thresholds.max_aspect_ratio;
  std::vector<std::pair<CellRect, int>> leftovers;  // region, originating room

  for (int k = 0; k < n; ++k) {
    CellRect& r = leaves[static_cast<std::size_t>(k)];
    const int lo = std::min(r.w(), r.h());
    const int hi = std::max(r.w(), r.h());
    if (hi > max_aspect * lo + 1e-9) {
      const int allowed = std::max(1, static_cast<int>(std::floor(max_aspect * lo + 1e-9)));
      const int excess = hi - allowed;
      CellRect strip = r;
      const bool at_start = rng.bernoulli(0.5);
      if (r.w() >= r.h()) {
        if (at_start) {
          strip.x1 = r.x0 + excess;
          r.x0 += excess;
        } else {
          strip.x0 = r.x1 - excess;
          r.x1 -= excess;
        }
      } else {
        if (at_start) {
          strip.y1 = r.y0 + excess;
          r.y0 += excess;
        } else {
          strip.y0 = r.y1 - excess;
          r.y1 -= excess;
        }
      }
      leftovers.push_back({strip, k});
    }
    fill(d, r, k);
  }
  for (const auto& [strip, origin] : leftovers) fill(d, strip, LayoutDraft::kLeftover);

  // Corner notches give L-shaped rooms.
  const int min_arm = static_cast<int>(std::ceil(1.0 / res - 1e-9));
  for (int k = 0; k < n; ++k) {
    const CellRect r = leaves[static_cast<std::size_t>(k)];
    if (!rng.bernoulli(0.3)) continue;
    if (r.w() < 2 * min_arm || r.h() < 2 * min_arm) continue;
    const int cx = static_cast<int>(rng.uniform_int(std::max(1, r.w() / 4), r.w() / 2));
    const int cy = static_cast<int>(rng.uniform_int(std::max(1, r.h() / 4), r.h() / 2));
    if (r.w() - cx < min_arm || r.h() - cy < min_arm) continue;
    const double fill_after = 1.0 - static_cast<double>(cx * cy) / r.cells();
    const double area_after = (r.cells() - cx * cy) * res * res;
    if (fill_after < spec.thresholds.min_fill_ratio ||
        area_after < spec.thresholds.min_room_area.at(types[static_cast<std::size_t>(k)])) {
      continue;
    }
    const int corner = static_cast<int>(rng.uniform_int(0, 3));
    CellRect notch;
    notch.x0 = (corner & 1) ? r.x1 - cx : r.x0;
    notch.x1 = notch.x0 + cx;
    notch.y0 = (corner & 2) ? r.y1 - cy : r.y0;
    notch.y1 = notch.y0 + cy;
    fill(d, notch, LayoutDraft::kLeftover);
    leftovers.push_back({notch, k});
  }

  for (const auto& [region, origin] : leftovers) {
    int chosen = -1;
    int first_neighbour = -1;
    for (int k = 0; k < n; ++k) {
      if (k == origin || !region_adjacent(d, k, region)) continue;
      if (first_neighbour < 0) first_neighbour = k;
      auto s = merged_score(d, k, region);
      if (s && s->fill_ratio >= spec.thresholds.min_fill_ratio - 1e-9 &&
          s->aspect_ratio <= max_aspect + 1e-9) {
        chosen = k;
        break;
      }
    }
    const int target = chosen >= 0 ? chosen : first_neighbour;
    if (target >= 0 && chosen >= 0) {
      expand_l_shape(d, d.room_id(target), region, spec.interior_wall_thickness * 0.5,
                     spec.exterior_wall_thickness * 0.5);
    } else {
      for (int j = region.y0; j < region.y1; ++j) {
        for (int i = region.x0; i < region.x1; ++i) {
          if (!d.is_room(i, j)) d.set(i, j, LayoutDraft::kUnusable);
        }
      }
    }
  }
  return d;
}

// Largest footprint side needed by the smallest candidate of every
// mandatory class, plus one walkway width.
inline double min_room_side(const Catalog& catalog, RoomType type) {
  double need = 0.0;
  for (const std::string& cls : mandatory_classes(type)) {
    double best = -1.0;
    for (const auto& a : catalog.assets()) {
      if (a.category != Category::kBasic || a.object_class != cls || !a.fits_room(type)) continue;
      const double side = std::min(a.bounds.x, a.bounds.y);
      if (best < 0.0 || side < best) best = side;
    }
    if (best > 0.0) need = std::max(need, best);
  }
  return need > 0.0 ? need + 0.8 : 0.0;
}

struct WallEdgeKey {
  int a;
  int b;
  bool operator==(const WallEdgeKey&) const = default;
};

inline void build_walls(const LayoutSpec& spec, FloorBuild& fb) {
  const LayoutDraft& d = fb.draft;
  auto norm = [&](int v) { return v >= 0 ? v : -1; };
  auto emit = [&](int p, int q, Vec2 a, Vec2 b) {
    WallSegment w;
    w.floor_index = d.floor_index;
    w.a = a;
    w.b = b;
    const int lo = std::min(p, q) >= 0 ? std::min(p, q) : std::max(p, q);
    const int hi = std::min(p, q) >= 0 ? std::max(p, q) : -1;
    w.room_a = d.room_id(lo);
    w.room_b = hi >= 0 ? d.room_id(hi) : std::string(kExterior);
    w.kind = hi >= 0 ? WallKind::kInterior : WallKind::kExterior;
    w.thickness = hi >= 0 ? spec.interior_wall_thickness : spec.exterior_wall_thickness;
    fb.level.walls.push_back(w);
  };
  const double res = d.resolution;
  for (int j = 0; j <= d.ny; ++j) {
    int i = 0;
    while (i < d.nx) {
      const int p = norm(d.at(i, j - 1));
      const int q = norm(d.at(i, j));
      if (p == q || (p < 0 && q < 0)) {
        ++i;
        continue;
      }
      int e = i + 1;
      while (e < d.nx && norm(d.at(e, j - 1)) == p && norm(d.at(e, j)) == q) ++e;
      emit(p, q, {i * res, j * res}, {e * res, j * res});
      i = e;
    }
  }
  for (int i = 0; i <= d.nx; ++i) {
    int j = 0;
    while (j < d.ny) {
      const int p = norm(d.at(i - 1, j));
      const int q = norm(d.at(i, j));
      if (p == q || (p < 0 && q < 0)) {
        ++j;
        continue;
      }
      int e = j + 1;
      while (e < d.ny && norm(d.at(i - 1, e)) == p && norm(d.at(i, e)) == q) ++e;
      emit(p, q, {i * res, j * res}, {i * res, e * res});
      j = e;
    }
  }
  for (std::size_t k = 0; k < fb.level.walls.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "f%d_w%03zu", d.floor_index, k);
    fb.level.walls[k].wall_id = buf;
  }
}

inline Opening make_door(const WallSegment& w, OpeningKind kind, double width, Rng& rng) {
  Opening o;
  o.kind = kind;
  o.wall_id = w.wall_id;
  o.floor_index = w.floor_index;
  o.width = width;
  o.height = kDoorHeight;
  o.room_a = w.room_a;
  o.room_b = w.room_b;
  const double len = w.length();
  const double lo = kDoorEndMargin + width * 0.5;
  const double hi = len - kDoorEndMargin - width * 0.5;
  const double t = hi > lo ? rng.uniform(lo, hi) : len * 0.5;
  const Vec2 dir = (w.b - w.a) * (1.0 / len);
  o.center = w.a + dir * t;
  return o;
}

inline void build_doors(FloorBuild& fb, Rng& rng) {
  auto& level = fb.level;
  const int n = static_cast<int>(fb.draft.room_types.size());
  const double min_len = kDoorWidth + 2.0 * kDoorEndMargin;
  // Longest shared interior wall per room pair.
  std::map<std::pair<std::string, std::string>, std::size_t> longest;
  for (std::size_t k = 0; k < level.walls.size(); ++k) {
    const auto& w = level.walls[k];
    if (w.kind != WallKind::kInterior || w.length() < min_len - 1e-9) continue;
    auto key = std::make_pair(w.room_a, w.room_b);
    auto it = longest.find(key);
    if (it == longest.end() || w.length() > level.walls[it->second].length() + 1e-12) {
      longest[key] = k;
    }
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [key, idx] : longest) edges.push_back(key);
  rng.shuffle(edges);
  UnionFind uf(static_cast<std::size_t>(n));
  std::set<std::size_t> door_walls;
  for (const auto& e : edges) {
    const int a = fb.draft.room_index(e.first);
    const int b = fb.draft.room_index(e.second);
    if (uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) {
      door_walls.insert(longest[e]);
    }
  }
  for (int k = 1; k < n; ++k) {
    if (uf.find(static_cast<std::size_t>(k)) != uf.find(0)) throw Rejected{"rooms cannot be joined by doors"};
  }
  for (std::size_t k = 0; k < level.walls.size(); ++k) {
    const auto& w = level.walls[k];
    if (w.kind != WallKind::kInterior || door_walls.count(k) || w.length() < min_len - 1e-9) continue;
    if (rng.bernoulli(0.25)) door_walls.insert(k);
  }
  for (std::size_t k : door_walls) {
    level.openings.push_back(make_door(level.walls[k], OpeningKind::kDoor, kDoorWidth, rng));
    fb.door_zones.push_back(door_clearance(level.openings.back(), level.walls[k].horizontal()));
  }
}

inline void build_exterior_door(FloorBuild& fb, Rng& rng) {
  auto& level = fb.level;
  const double min_len = kExteriorDoorWidth + 2.0 * kDoorEndMargin;
  std::vector<std::size_t> best;
  int best_rank = 1 << 20;
  std::string best_room;
  for (std::size_t k = 0; k < level.walls.size(); ++k) {
    const auto& w = level.walls[k];
    if (w.kind != WallKind::kExterior || w.length() < min_len - 1e-9) continue;
    const int idx = fb.draft.room_index(w.room_a);
    const int rank = type_rank(fb.draft.room_types[static_cast<std::size_t>(idx)]);
    if (rank < best_rank || (rank == best_rank && w.room_a < best_room)) {
      best_rank = rank;
      best_room = w.room_a;
      best.clear();
    }
    if (rank == best_rank && w.room_a == best_room) best.push_back(k);
  }
  if (best.empty()) throw Rejected{"no exterior wall can host the entrance"};
  const std::size_t k = best[rng.index(best.size())];
  level.openings.push_back(make_door(level.walls[k], OpeningKind::kExteriorDoor, kExteriorDoorWidth, rng));
  fb.door_zones.push_back(door_clearance(level.openings.back(), level.walls[k].horizontal()));
}

inline bool cells_single_room(const LayoutDraft& d, const CellRect& r, int* room) {
  const int v = d.at(r.x0, r.y0);
  if (v < 0) return false;
  for (int j = r.y0; j < r.y1; ++j) {
    for (int i = r.x0; i < r.x1; ++i) {
      if (d.at(i, j) != v) return false;
    }
  }
  *room = v;
  return true;
}

inline constexpr double kStairWidth = 1.0;
inline constexpr double kStairRun = 3.0;

inline Staircase place_staircase(const LayoutSpec& spec, const FloorBuild& lower,
                                 const FloorBuild& upper, Rng& rng) {
  const LayoutDraft& dl = lower.draft;
  const double res = spec.grid_resolution;
  const int wc = static_cast<int>(std::ceil(kStairWidth / res - 1e-9));
  const int lc = static_cast<int>(std::ceil(kStairRun / res - 1e-9));
  struct Candidate {
    int i, j;
    bool along_x;
  };
  std::vector<Candidate> cands;
  for (int along = 0; along < 2; ++along) {
    const int w = along ? lc : wc;
    const int h = along ? wc : lc;
    for (int j = 0; j + h <= dl.ny; ++j) {
      for (int i = 0; i + w <= dl.nx; ++i) cands.push_back({i, j, along == 1});
    }
  }
  rng.shuffle(cands);
  for (const Candidate& c : cands) {
    const CellRect r{c.i, c.j, c.i + (c.along_x ? lc : wc), c.j + (c.along_x ? wc : lc)};
    int lo_room = -1;
    int up_room = -1;
    if (!cells_single_room(lower.draft, r, &lo_room) || !cells_single_room(upper.draft, r, &up_room)) {
      continue;
    }
    const Rect2 fp{{r.x0 * res, r.y0 * res}, {r.x1 * res, r.y1 * res}};
    const Room& rl = lower.level.rooms[static_cast<std::size_t>(lo_room)];
    const Room& ru = upper.level.rooms[static_cast<std::size_t>(up_room)];
    const OrientedRect box = OrientedRect::from_aabb(fp);
    if (!contained_in(box, decompose_rectilinear(rl.interior), 0.0) ||
        !contained_in(box, decompose_rectilinear(ru.interior), 0.0)) {
      continue;
    }
    bool blocked = false;
    for (const Rect2& z : lower.door_zones) blocked = blocked || rects_overlap(z, fp);
    for (const Rect2& z : upper.door_zones) blocked = blocked || rects_overlap(z, fp);
    if (blocked) continue;
    // Landing cells at both ends must stay inside the same rooms.
    const bool forward = rng.bernoulli(0.5);
    CellRect entry = r;
    CellRect exit = r;
    if (c.along_x) {
      entry.x0 = forward ? r.x0 - 1 : r.x1;
      entry.x1 = entry.x0 + 1;
      exit.x0 = forward ? r.x1 : r.x0 - 1;
      exit.x1 = exit.x0 + 1;
    } else {
      entry.y0 = forward ? r.y0 - 1 : r.y1;
      entry.y1 = entry.y0 + 1;
      exit.y0 = forward ? r.y1 : r.y0 - 1;
      exit.y1 = exit.y0 + 1;
    }
    int er = -1;
    int xr = -1;
    if (!cells_single_room(lower.draft, entry, &er) || er != lo_room) continue;
    if (!cells_single_room(upper.draft, exit, &xr) || xr != up_room) continue;
    Staircase s;
    s.footprint = fp;
    s.lower_floor = dl.floor_index;
    s.upper_floor = dl.floor_index + 1;
    s.lower_room = rl.room_id;
    s.upper_room = ru.room_id;
    s.run_direction = std::string(forward ? "+" : "-") + (c.along_x ? "x" : "y");
    return s;
  }
  throw Rejected{"no staircase position fits both floors"};
}

}  // namespace layout_detail

// Extra acceptance test for a finished plan; returns a rejection reason, or
// an empty string to accept.
using PlanCheck = std::function<std::string(const FloorPlan&)>;

// Deterministic in (spec, seed). Throws GenerationExhausted when no proposal
// within the budget passes every threshold and the optional plan check.
inline FloorPlan generate_floorplan(const LayoutSpec& spec, const Catalog& catalog, std::uint64_t seed,
                                    const PlanCheck& accept = {}) {
  using namespace layout_detail;
  validate_spec(spec);
  std::vector<RoomType> sorted = spec.rooms_requested;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](RoomType a, RoomType b) { return type_rank(a) < type_rank(b); });
  std::vector<std::vector<RoomType>> per_floor(static_cast<std::size_t>(spec.floors));
  {
    const std::size_t n = sorted.size();
    const std::size_t f = per_floor.size();
    std::size_t pos = 0;
    for (std::size_t k = 0; k < f; ++k) {
      const std::size_t take = n / f + (k < n % f ? 1 : 0);
      per_floor[k].assign(sorted.begin() + static_cast<std::ptrdiff_t>(pos),
                          sorted.begin() + static_cast<std::ptrdiff_t>(pos + take));
      pos += take;
    }
  }
  const double ih = spec.interior_wall_thickness * 0.5;
  const double eh = spec.exterior_wall_thickness * 0.5;
  std::string last_reason;
  for (int p = 0; p < spec.proposal_budget; ++p) {
    Rng rng(seed, "layout/proposal/" + std::to_string(p));
    try {
      std::vector<FloorBuild> builds;
      for (int f = 0; f < spec.floors; ++f) {
        FloorBuild fb;
        fb.draft = propose_rooms(spec, f, per_floor[static_cast<std::size_t>(f)], rng);
        fb.level.index = f;
        const int n = static_cast<int>(fb.draft.room_types.size());
        for (int k = 0; k < n; ++k) {
          auto poly = room_polygon(fb.draft, k);
          if (!poly) throw Rejected{"room is not a simple polygon"};
          Room room = make_room(fb.draft, k, ih, eh);
          const RoomScore s = score_room(room);
          if (!passes_thresholds(s, polygon_area(room.polygon), room.room_type, spec.thresholds)) {
            throw Rejected{"room " + room.room_id + " misses thresholds"};
          }
          const Rect2 ib = bounding_box(room.interior);
          if (std::min(ib.width(), ib.height()) < min_room_side(catalog, room.room_type) - 1e-9) {
            throw Rejected{"room " + room.room_id + " too narrow for its furniture"};
          }
          fb.level.rooms.push_back(std::move(room));
        }
        build_walls(spec, fb);
        build_doors(fb, rng);
        if (f == 0) build_exterior_door(fb, rng);
        builds.push_back(std::move(fb));
      }
      FloorPlan plan;
      plan.spec = spec;
      plan.generation_seed = seed;
      plan.rejected_proposals = p;
      for (int f = 0; f + 1 < spec.floors; ++f) {
        Staircase s = place_staircase(spec, builds[static_cast<std::size_t>(f)],
                                      builds[static_cast<std::size_t>(f + 1)], rng);
        s.staircase_id = "stair_" + std::to_string(f);
        builds[static_cast<std::size_t>(f)].level.ceiling_cutouts.push_back(s.footprint);
        plan.staircases.push_back(s);
      }
      for (auto& fb : builds) {
        auto& ops = fb.level.openings;
        for (std::size_t k = 0; k < ops.size(); ++k) {
          ops[k].opening_id = "f" + std::to_string(fb.level.index) + "_door" + std::to_string(k);
        }
        std::sort(ops.begin(), ops.end(),
                  [](const Opening& a, const Opening& b) { return a.opening_id < b.opening_id; });
        plan.floors.push_back(std::move(fb.level));
      }
      for (const Room* r : plan.all_rooms()) plan.metrics[r->room_id] = score_room(*r);
      if (!check_connectivity(plan)) throw Rejected{"plan is disconnected"};
      if (accept) {
        std::string reason = accept(plan);
        if (!reason.empty()) throw Rejected{std::move(reason)};
      }
      return plan;
    } catch (const Rejected& r) {
      last_reason = r.reason;
    }
  }
  throw GenerationExhausted("no layout passed thresholds; rejected " +
                            std::to_string(spec.proposal_budget) + " proposals (last: " +
                            last_reason + ")");
}

// Door and staircase keep-out rectangles per floor, derived from a plan.
inline std::vector<Rect2> door_zones(const FloorPlan& plan, int floor) {
  std::vector<Rect2> out;
  for (const auto& f : plan.floors) {
    if (f.index != floor) continue;
    for (const auto& o : f.openings) {
      const WallSegment* w = plan.find_wall(o.wall_id);
      if (w) out.push_back(door_clearance(o, w->horizontal()));
    }
  }
  return out;
}

}  // namespace scenesmith
