#pragma once

// Two-phase semantic placement. Basic furniture is placed per room during
// construction; interactables are added later onto support surfaces whose
// kind matches the asset's placement tags and subtype.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/geometry.hpp"
#include "scenesmith/layout.hpp"
#include "scenesmith/rng.hpp"

namespace scenesmith {

inline constexpr double kOverlapTolerance = 1e-3;
inline constexpr double kContainmentTolerance = 1e-3;
inline constexpr double kSurfaceMargin = 0.05;
inline constexpr double kWallGap = 0.02;
inline constexpr double kCorridorWidth = 0.8;
inline constexpr double kWallMountHeight = 1.4;
inline constexpr int kPoseBudget = 200;

struct Pose {
  Vec3 position;  // bottom-centre of the bounds box, world frame
  double yaw = 0.0;

  bool operator==(const Pose&) const = default;
};

struct PlacedAsset {
  std::string instance_id;
  std::string asset_id;
  Pose pose;
  std::string parent;  // room_id for floor/wall support, else an instance_id
  SupportKind support_kind = SupportKind::kFloor;
  std::string room_id;
  int floor_index = 0;
  Vec3 size;  // catalog bounds, copied so documents are self-describing

  bool operator==(const PlacedAsset&) const = default;

  OrientedRect footprint() const {
    return {{pose.position.x, pose.position.y}, size.x * 0.5, size.y * 0.5, pose.yaw};
  }
  double z_min() const { return pose.position.z; }
  double z_max() const { return pose.position.z + size.z; }
};

struct SupportSurface {
  std::string owner;
  SurfaceKind kind = SurfaceKind::kTabletop;
  Polygon polygon;  // owner frame, centred on the owner's origin
  double height = 0.0;  // above the owner's base
  std::optional<double> max_item_height;  // unset for open-top surfaces

  bool operator==(const SupportSurface&) const = default;

  Rect2 extent() const { return bounding_box(polygon); }
};

struct SceneGraph {
  FloorPlan plan;
  std::vector<PlacedAsset> placed;
  std::vector<SupportSurface> surfaces;
  std::map<std::string, std::vector<Rect2>> clearance;  // room_id -> keep-out rectangles

  bool operator==(const SceneGraph&) const = default;

  const PlacedAsset* find(std::string_view id) const {
    for (const auto& p : placed) {
      if (p.instance_id == id) return &p;
    }
    return nullptr;
  }
  const SupportSurface* surface_of(std::string_view owner) const {
    for (const auto& s : surfaces) {
      if (s.owner == owner) return &s;
    }
    return nullptr;
  }
};

struct PlacementRequest {
  std::string selector;  // asset_id, subtype name or object_class
  std::optional<std::string> room;  // room_id or room type name

  bool operator==(const PlacementRequest&) const = default;
  bool operator<(const PlacementRequest& o) const {
    return std::tie(room, selector) < std::tie(o.room, o.selector);
  }
};

struct AdjustmentDelta {
  std::optional<Vec3> position;  // translation
  std::optional<double> yaw;     // rotation about the asset centre, radians
};

// ---------------------------------------------------------------------------
// Rule tables

struct SurfaceRule {
  SurfaceKind kind;
  double height_fraction;
  std::optional<double> clearance_fraction;
};

inline std::optional<SurfaceRule> surface_rule(const AssetRecord& a) {
  static const std::map<std::string, SurfaceRule, std::less<>> kTable = {
      {"table", {SurfaceKind::kTabletop, 1.0, std::nullopt}},
      {"coffee_table", {SurfaceKind::kTabletop, 1.0, std::nullopt}},
      {"desk", {SurfaceKind::kTabletop, 1.0, std::nullopt}},
      {"nightstand", {SurfaceKind::kTabletop, 1.0, std::nullopt}},
      {"tv_stand", {SurfaceKind::kTabletop, 1.0, std::nullopt}},
      {"counter", {SurfaceKind::kCounter, 1.0, std::nullopt}},
      {"bed", {SurfaceKind::kBedTop, 1.0, std::nullopt}},
      {"bookshelf", {SurfaceKind::kShelf, 0.5, 0.3}},
      {"dish_rack", {SurfaceKind::kRack, 0.3, std::nullopt}},
      {"bowl", {SurfaceKind::kInterior, 0.1, std::nullopt}},
      {"trash_bin", {SurfaceKind::kInterior, 0.1, std::nullopt}},
  };
  auto it = kTable.find(a.object_class);
  if (it != kTable.end()) return it->second;
  if (a.has_joint(JointKindHint::kDoorLike)) return SurfaceRule{SurfaceKind::kInterior, 0.15, 0.7};
  return std::nullopt;
}

inline SupportKind support_kind_for(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::kBedTop:
      return SupportKind::kBed;
    case SurfaceKind::kInterior:
      return SupportKind::kInside;
    default:
      return SupportKind::kSurface;
  }
}

// Where an asset may rest. Surface kinds are tried in tiers: the first tier
// is preferred; later tiers are used only when the earlier ones offer no
// surface at all.
struct Compatibility {
  std::vector<std::vector<SurfaceKind>> tiers;
  bool floor = false;
  bool wall = false;

  bool allows(SurfaceKind k) const {
    for (const auto& t : tiers) {
      if (std::find(t.begin(), t.end(), k) != t.end()) return true;
    }
    return false;
  }
};

inline Compatibility compatibility(const AssetRecord& a) {
  std::set<SurfaceKind> kinds;
  auto add = [&](std::initializer_list<SurfaceKind> ks) { kinds.insert(ks.begin(), ks.end()); };
  Compatibility c;
  for (PlacementTag t : a.placement_tags) {
    switch (t) {
      case PlacementTag::kOnSurface:
        add({SurfaceKind::kTabletop, SurfaceKind::kCounter, SurfaceKind::kShelf});
        break;
      case PlacementTag::kOnBed:
        add({SurfaceKind::kBedTop});
        break;
      case PlacementTag::kInContainer:
        add({SurfaceKind::kInterior, SurfaceKind::kRack});
        break;
      case PlacementTag::kHangable:
        add({SurfaceKind::kInterior, SurfaceKind::kRack});
        break;
      case PlacementTag::kOnFloor:
        c.floor = true;
        break;
      case PlacementTag::kWallMounted:
        c.wall = true;
        break;
    }
  }
  std::optional<std::set<SurfaceKind>> narrow;
  switch (a.subtype) {
    case Subtype::kFood:
      narrow = std::set<SurfaceKind>{SurfaceKind::kTabletop, SurfaceKind::kCounter,
                                     SurfaceKind::kInterior};
      c.floor = false;
      break;
    case Subtype::kTool:
      narrow = std::set<SurfaceKind>{SurfaceKind::kCounter, SurfaceKind::kRack};
      break;
    case Subtype::kAppliance:
      narrow = std::set<SurfaceKind>{SurfaceKind::kCounter, SurfaceKind::kTabletop};
      break;
    default:
      break;
  }
  if (narrow) {
    std::set<SurfaceKind> kept;
    std::set_intersection(kinds.begin(), kinds.end(), narrow->begin(), narrow->end(),
                          std::inserter(kept, kept.begin()));
    kinds = kept;
  }
  std::vector<SurfaceKind> first;
  std::vector<SurfaceKind> second;
  for (SurfaceKind k : kinds) (k == SurfaceKind::kInterior ? second : first).push_back(k);
  if (!first.empty()) c.tiers.push_back(first);
  if (!second.empty()) c.tiers.push_back(second);
  return c;
}

// Furniture whose back face snaps to the nearest wall.
inline bool wall_snapped(std::string_view object_class) {
  static const std::set<std::string, std::less<>> kClasses = {
      "sofa", "tv", "bed", "closet", "bookshelf", "counter", "fridge", "stove",
      "dresser", "cabinet", "tv_stand"};
  return kClasses.count(object_class) > 0;
}

struct OptionalExtra {
  std::string object_class;
  double probability;
};

inline std::vector<OptionalExtra> optional_extras(RoomType room) {
  switch (room) {
    case RoomType::kLivingRoom:
      return {{"coffee_table", 0.8}, {"bookshelf", 0.6}, {"chair", 0.4}};
    case RoomType::kKitchen:
      return {{"counter", 0.9}, {"chair", 0.6}};
    case RoomType::kBedroom:
      return {{"nightstand", 0.8}, {"desk", 0.4}, {"bookshelf", 0.3}};
    case RoomType::kAny:
      break;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Surfaces

inline std::optional<SupportSurface> surface_for(const PlacedAsset& p, const AssetRecord& a) {
  auto rule = surface_rule(a);
  if (!rule) return std::nullopt;
  const double hx = p.size.x * 0.5 - kSurfaceMargin;
  const double hy = p.size.y * 0.5 - kSurfaceMargin;
  if (!(hx > 0.0) || !(hy > 0.0)) return std::nullopt;
  SupportSurface s;
  s.owner = p.instance_id;
  s.kind = rule->kind;
  s.polygon = {{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}};
  s.height = p.size.z * rule->height_fraction;
  if (rule->clearance_fraction) s.max_item_height = p.size.z * *rule->clearance_fraction;
  return s;
}

inline std::vector<SupportSurface> find_support_surfaces(const SceneGraph& scene,
                                                         const Catalog& catalog) {
  std::vector<SupportSurface> out;
  for (const auto& p : scene.placed) {
    const AssetRecord* a = catalog.find(p.asset_id);
    if (!a) continue;
    if (auto s = surface_for(p, *a)) out.push_back(std::move(*s));
  }
  return out;
}

// Surface rectangle in world coordinates.
inline OrientedRect surface_world_rect(const PlacedAsset& owner, const SupportSurface& s) {
  const Rect2 e = s.extent();
  const Vec2 c = to_world({owner.pose.position.x, owner.pose.position.y}, owner.pose.yaw, e.center());
  return {c, e.width() * 0.5, e.height() * 0.5, owner.pose.yaw};
}

// ---------------------------------------------------------------------------
// Clearance

namespace furnish_detail {

inline Rect2 footprint_aabb(const OrientedRect& r) {
  const auto c = r.corners();
  return bounding_box(Polygon(c.begin(), c.end()));
}

inline bool overlaps_any(const Rect2& box, const std::vector<Rect2>& rects) {
  for (const Rect2& r : rects) {
    if (box.min.x < r.max.x - 1e-9 && r.min.x < box.max.x - 1e-9 && box.min.y < r.max.y - 1e-9 &&
        r.min.y < box.max.y - 1e-9) {
      return true;
    }
  }
  return false;
}

// Walkway cells between portals, found by breadth-first search over the
// grid cells that lie fully inside the room interior.
inline std::vector<Rect2> corridors(const Room& room, const std::vector<Vec2>& portals, double res) {
  if (portals.size() < 2) return {};
  const auto pieces = decompose_rectilinear(room.interior);
  const Rect2 box = bounding_box(room.interior);
  const int nx = static_cast<int>(std::ceil(box.width() / res - 1e-9));
  const int ny = static_cast<int>(std::ceil(box.height() / res - 1e-9));
  auto cell_rect = [&](int i, int j) {
    return Rect2{{box.min.x + i * res, box.min.y + j * res},
                 {std::min(box.max.x, box.min.x + (i + 1) * res),
                  std::min(box.max.y, box.min.y + (j + 1) * res)}};
  };
  std::vector<char> free(static_cast<std::size_t>(nx * ny), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      free[static_cast<std::size_t>(j * nx + i)] =
          contained_in(OrientedRect::from_aabb(cell_rect(i, j)), pieces, 0.0) ? 1 : 0;
    }
  }
  auto nearest = [&](Vec2 p) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < nx * ny; ++k) {
      if (!free[static_cast<std::size_t>(k)]) continue;
      const double d = length(cell_rect(k % nx, k / nx).center() - p);
      if (d < bd - 1e-12) {
        bd = d;
        best = k;
      }
    }
    return best;
  };
  std::set<int> path_cells;
  const int start = nearest(portals.front());
  if (start < 0) return {};
  std::vector<int> prev(static_cast<std::size_t>(nx * ny), -2);
  std::deque<int> queue{start};
  prev[static_cast<std::size_t>(start)] = -1;
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    const int i = k % nx;
    const int j = k / nx;
    const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& n : nb) {
      if (n[0] < 0 || n[1] < 0 || n[0] >= nx || n[1] >= ny) continue;
      const int q = n[1] * nx + n[0];
      if (!free[static_cast<std::size_t>(q)] || prev[static_cast<std::size_t>(q)] != -2) continue;
      prev[static_cast<std::size_t>(q)] = k;
      queue.push_back(q);
    }
  }
  for (std::size_t p = 1; p < portals.size(); ++p) {
    int k = nearest(portals[p]);
    if (k < 0 || prev[static_cast<std::size_t>(k)] == -2) continue;
    while (k >= 0) {
      path_cells.insert(k);
      k = prev[static_cast<std::size_t>(k)];
    }
  }
  std::vector<Rect2> out;
  const double pad = (kCorridorWidth - res) * 0.5;
  for (int k : path_cells) {
    const Rect2 c = cell_rect(k % nx, k / nx);
    out.push_back({{c.min.x - pad, c.min.y - pad}, {c.max.x + pad, c.max.y + pad}});
  }
  return out;
}

inline Vec2 stair_landing(const Staircase& s, bool lower) {
  const Rect2& f = s.footprint;
  const bool plus = s.run_direction[0] == '+';
  const bool along_x = s.run_direction[1] == 'x';
  // The entry is at the start of the run on the lower floor, the exit at the end upstairs.
  const bool at_max = lower ? !plus : plus;
  const Vec2 c = f.center();
  if (along_x) return {at_max ? f.max.x + 0.4 : f.min.x - 0.4, c.y};
  return {c.x, at_max ? f.max.y + 0.4 : f.min.y - 0.4};
}

}  // namespace furnish_detail

// Keep-out rectangles per room: door swings, staircase footprints with their
// landings, and a walkway joining every portal of the room.
inline std::map<std::string, std::vector<Rect2>> compute_clearance(const FloorPlan& plan) {
  std::map<std::string, std::vector<Rect2>> out;
  for (const auto& level : plan.floors) {
    for (const auto& room : level.rooms) {
      std::vector<Rect2>& rects = out[room.room_id];
      std::vector<Vec2> portals;
      for (const auto& o : level.openings) {
        if (o.room_a != room.room_id && o.room_b != room.room_id) continue;
        const WallSegment* w = plan.find_wall(o.wall_id);
        if (!w) continue;
        rects.push_back(door_clearance(o, w->horizontal()));
        // Step just inside the room.
        Vec2 n = w->horizontal() ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
        if (!point_in_polygon(room.interior, o.center + n * 0.3)) n = n * -1.0;
        portals.push_back(o.center + n * 0.3);
      }
      for (const auto& s : plan.staircases) {
        const bool lower = s.lower_room == room.room_id;
        const bool upper = s.upper_room == room.room_id;
        if (!lower && !upper) continue;
        rects.push_back(s.footprint);
        const Vec2 l = furnish_detail::stair_landing(s, lower);
        const double h = kCorridorWidth * 0.5;
        rects.push_back({{l.x - h, l.y - h}, {l.x + h, l.y + h}});
        portals.push_back(l);
      }
      const auto walk = furnish_detail::corridors(room, portals, plan.spec.grid_resolution);
      rects.insert(rects.end(), walk.begin(), walk.end());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks shared by placement, adjustment and validation

inline bool is_ancestor(const SceneGraph& scene, std::string_view ancestor, const PlacedAsset& p) {
  std::string cur = p.parent;
  for (int depth = 0; depth < 64; ++depth) {
    const PlacedAsset* q = scene.find(cur);
    if (!q) return false;
    if (q->instance_id == ancestor) return true;
    cur = q->parent;
  }
  return false;
}

inline bool assets_collide(const PlacedAsset& a, const PlacedAsset& b, double tolerance) {
  if (a.floor_index != b.floor_index) return false;
  const double z_overlap = std::min(a.z_max(), b.z_max()) - std::max(a.z_min(), b.z_min());
  if (z_overlap <= tolerance) return false;
  return sat_penetration(a.footprint(), b.footprint()) > tolerance;
}

inline bool inside_room(const PlacedAsset& p, const Room& room, double tolerance) {
  return contained_in(p.footprint(), decompose_rectilinear(room.interior), tolerance);
}

inline bool blocks_clearance(const SceneGraph& scene, const PlacedAsset& p) {
  if (p.support_kind != SupportKind::kFloor) return false;
  auto it = scene.clearance.find(p.room_id);
  if (it == scene.clearance.end()) return false;
  return furnish_detail::overlaps_any(furnish_detail::footprint_aabb(p.footprint()), it->second);
}

inline ValidationReport check_collision_free(const SceneGraph& scene) {
  ValidationReport report;
  const auto& v = scene.placed;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (is_ancestor(scene, v[i].instance_id, v[j]) || is_ancestor(scene, v[j].instance_id, v[i])) {
        continue;
      }
      if (assets_collide(v[i], v[j], kOverlapTolerance)) {
        report.error("COLLISION", "scene.placed[" + std::to_string(i) + "]",
                     v[i].instance_id + " overlaps " + v[j].instance_id);
      }
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Room* room = scene.plan.find_room(v[i].room_id);
    if (!room) {
      report.error("CONTAINMENT", "scene.placed[" + std::to_string(i) + "]",
                   v[i].instance_id + " names unknown room " + v[i].room_id);
    } else if (!inside_room(v[i], *room, kContainmentTolerance)) {
      report.error("CONTAINMENT", "scene.placed[" + std::to_string(i) + "]",
                   v[i].instance_id + " protrudes outside room " + v[i].room_id);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Placement engine

namespace furnish_detail {

// Placement only appends, so undoing a failed attempt is a truncation.
struct Checkpoint {
  std::size_t placed;
  std::size_t surfaces;
};
inline Checkpoint checkpoint(const SceneGraph& s) { return {s.placed.size(), s.surfaces.size()}; }
inline void rollback(SceneGraph& s, const Checkpoint& c) {
  s.placed.resize(c.placed);
  s.surfaces.resize(c.surfaces);
}

inline std::string instance_id_for(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "inst_%04zu", n);
  return buf;
}

inline bool room_matches(const Room& room, const std::optional<std::string>& sel) {
  if (!sel) return true;
  if (room.room_id == *sel) return true;
  auto t = parse_enum<RoomType>(*sel);
  return t && *t == room.room_type;
}

class Placer {
 public:
  Placer(SceneGraph& scene, const Catalog& catalog) : scene_(scene), catalog_(catalog) {
    for (const Room* r : scene_.plan.all_rooms()) {
      rooms_.push_back(r);
      pieces_[r->room_id] = decompose_rectilinear(r->interior);
    }
  }

  const std::vector<const Room*>& rooms() const { return rooms_; }

  std::string next_id() const {
    std::size_t n = scene_.placed.size();
    while (scene_.find(instance_id_for(n))) ++n;
    return instance_id_for(n);
  }

  // Checks a candidate against every placed asset, the room outline and,
  // for floor assets, the clearance map.
  bool acceptable(const PlacedAsset& p) const {
    if (!contained_in(p.footprint(), pieces_.at(p.room_id), 0.0)) return false;
    if (blocks_clearance(scene_, p)) return false;
    for (const auto& q : scene_.placed) {
      if (q.instance_id == p.parent || is_ancestor(scene_, q.instance_id, p)) continue;
      if (assets_collide(p, q, 0.0)) return false;
    }
    return true;
  }

  bool room_excludes(const AssetRecord& a, const Room& room) const {
    for (const auto& rule : catalog_.rules()) {
      if (rule.relation != Relation::kExcludes) continue;
      const bool as_subject = reference_matches(a, rule.subject);
      const bool as_object = reference_matches(a, rule.object);
      if (!as_subject && !as_object) continue;
      for (const auto& q : scene_.placed) {
        if (q.room_id != room.room_id) continue;
        const AssetRecord* qa = catalog_.find(q.asset_id);
        if (!qa) continue;
        if ((as_subject && reference_matches(*qa, rule.object)) ||
            (as_object && reference_matches(*qa, rule.subject))) {
          return true;
        }
      }
    }
    return false;
  }

  bool room_has(const Room& room, std::string_view ref) const {
    for (const auto& q : scene_.placed) {
      if (q.room_id != room.room_id) continue;
      const AssetRecord* qa = catalog_.find(q.asset_id);
      if (qa && reference_matches(*qa, ref)) return true;
    }
    return false;
  }

  // Samples one floor pose. Returns nullopt on a rejected attempt.
  std::optional<PlacedAsset> sample_floor(const AssetRecord& a, const Room& room, Rng& rng,
                                          bool basic) const {
    PlacedAsset p = blank(a, room);
    const double z = scene_.plan.elevation(room.floor_index);
    if (wall_snapped(a.object_class)) {
      auto pose = sample_against_wall(a, room, rng, kWallGap);
      if (!pose) return std::nullopt;
      p.pose = *pose;
    } else {
      const Rect2 box = bounding_box(room.interior);
      p.pose.position = {rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y), z};
      p.pose.yaw = basic ? kCardinalYaws[rng.index(4)] : normalize_yaw(rng.uniform(0.0, kTwoPi));
    }
    p.pose.position.z = z;
    p.parent = room.room_id;
    p.support_kind = SupportKind::kFloor;
    return p;
  }

  std::optional<PlacedAsset> sample_wall(const AssetRecord& a, const Room& room, Rng& rng) const {
    auto pose = sample_against_wall(a, room, rng, 0.0);
    if (!pose) return std::nullopt;
    PlacedAsset p = blank(a, room);
    p.pose = *pose;
    p.pose.position.z = scene_.plan.elevation(room.floor_index) + kWallMountHeight;
    p.parent = room.room_id;
    p.support_kind = SupportKind::kWall;
    return p;
  }

  std::optional<PlacedAsset> sample_surface(const AssetRecord& a, const SupportSurface& s,
                                            Rng& rng) const {
    const PlacedAsset* owner = scene_.find(s.owner);
    if (!owner) return std::nullopt;
    if (s.max_item_height && a.bounds.z > *s.max_item_height) return std::nullopt;
    const Rect2 e = s.extent();
    // Half the items sit square to the surface edges.
    double local_yaw = rng.bernoulli(0.5) ? kCardinalYaws[rng.index(4)] : rng.uniform(0.0, kTwoPi);
    auto half_extent = [&](double yaw) {
      const double c = std::abs(std::cos(yaw));
      const double sn = std::abs(std::sin(yaw));
      return Vec2{c * a.bounds.x * 0.5 + sn * a.bounds.y * 0.5, sn * a.bounds.x * 0.5 + c * a.bounds.y * 0.5};
    };
    auto fits = [&](Vec2 h) { return h.x <= e.width() * 0.5 && h.y <= e.height() * 0.5; };
    Vec2 h = half_extent(local_yaw);
    if (!fits(h)) {
      // Tight surfaces: fall back to the nearest quarter turn.
      local_yaw = normalize_yaw(std::round(local_yaw / (kPi * 0.5)) * kPi * 0.5);
      h = half_extent(local_yaw);
      if (!fits(h)) return std::nullopt;
    }
    const double ex = h.x;
    const double ey = h.y;
    // Items are often pushed against an edge, which keeps the middle free.
    auto coord = [&](double lo, double hi) {
      const double u = rng.uniform();
      if (u < 0.25) return lo;
      if (u < 0.5) return hi;
      return rng.uniform(lo, hi);
    };
    const double lx = coord(e.min.x + ex, e.max.x - ex);
    const double ly = coord(e.min.y + ey, e.max.y - ey);
    const Vec2 local{lx, ly};
    const Vec2 world =
        to_world({owner->pose.position.x, owner->pose.position.y}, owner->pose.yaw, local);
    const Room* room = scene_.plan.find_room(owner->room_id);
    PlacedAsset p = blank(a, *room);
    p.pose.position = {world.x, world.y, owner->pose.position.z + s.height};
    p.pose.yaw = normalize_yaw(owner->pose.yaw + local_yaw);
    p.parent = owner->instance_id;
    p.support_kind = support_kind_for(s.kind);
    return p;
  }

  void commit(PlacedAsset p) {
    const AssetRecord* a = catalog_.find(p.asset_id);
    scene_.placed.push_back(p);
    if (a) {
      if (auto s = surface_for(p, *a)) scene_.surfaces.push_back(std::move(*s));
    }
  }

  static constexpr std::array<double, 4> kCardinalYaws = {0.0, kPi * 0.5, kPi, kPi * 1.5};

 private:
  PlacedAsset blank(const AssetRecord& a, const Room& room) const {
    PlacedAsset p;
    p.instance_id = next_id();
    p.asset_id = a.asset_id;
    p.room_id = room.room_id;
    p.floor_index = room.floor_index;
    p.size = a.bounds;
    return p;
  }

  // Back face parallel to an interior edge, `gap` away from the wall face.
  std::optional<Pose> sample_against_wall(const AssetRecord& a, const Room& room, Rng& rng,
                                          double gap) const {
    const Polygon& poly = room.interior;
    double total = 0.0;
    std::vector<double> lengths;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const double len = length(poly[(i + 1) % poly.size()] - poly[i]);
      lengths.push_back(len >= a.bounds.x ? len : 0.0);
      total += lengths.back();
    }
    if (total <= 0.0) return std::nullopt;
    double pick = rng.uniform(0.0, total);
    std::size_t e = 0;
    while (e + 1 < lengths.size() && pick >= lengths[e]) pick -= lengths[e++];
    while (lengths[e] <= 0.0) e = (e + 1) % lengths.size();
    const Vec2 p0 = poly[e];
    const Vec2 p1 = poly[(e + 1) % poly.size()];
    const double len = lengths[e];
    const Vec2 dir = (p1 - p0) * (1.0 / len);
    const Vec2 inward{-dir.y, dir.x};
    const double t = rng.uniform(a.bounds.x * 0.5, len - a.bounds.x * 0.5);
    const Vec2 c = p0 + dir * t + inward * (a.bounds.y * 0.5 + gap);
    Pose pose;
    pose.position = {c.x, c.y, 0.0};
    // Local +y (front) points along the inward normal.
    pose.yaw = normalize_yaw(std::atan2(-inward.x, inward.y));
    for (double cy : kCardinalYaws) {
      if (std::abs(pose.yaw - cy) < 1e-9) pose.yaw = cy;
    }
    return pose;
  }

  SceneGraph& scene_;
  const Catalog& catalog_;
  std::vector<const Room*> rooms_;
  std::map<std::string, std::vector<Rect2>> pieces_;
};

struct PlaceOutcome {
  bool placed = false;
  bool had_target = false;
};

// Up to kPoseBudget attempts for one asset in one room. Surface targets
// follow the compatibility tiers; `parent` pins a specific support.
inline PlaceOutcome try_place(Placer& placer, SceneGraph& scene, const Catalog& catalog,
                              const AssetRecord& a, const Room& room, Rng& rng, bool basic,
                              const std::string* parent = nullptr) {
  const Compatibility compat = compatibility(a);
  std::vector<const SupportSurface*> targets;
  if (parent) {
    const SupportSurface* s = scene.surface_of(*parent);
    if (s && compat.allows(s->kind)) targets.push_back(s);
  } else {
    for (const auto& tier : compat.tiers) {
      for (const auto& s : scene.surfaces) {
        const PlacedAsset* owner = scene.find(s.owner);
        if (!owner || owner->room_id != room.room_id) continue;
        if (std::find(tier.begin(), tier.end(), s.kind) != tier.end()) targets.push_back(&s);
      }
      if (!targets.empty()) break;
    }
  }
  const bool floor = !parent && compat.floor;
  const bool wall = !parent && compat.wall && !floor && targets.empty();
  PlaceOutcome out;
  out.had_target = floor || wall || !targets.empty();
  if (!out.had_target) return out;

  // prefers_near: with probability w / (1 + w) keep the candidate nearest
  // to an instance of the preferred object among a few valid ones.
  std::vector<Vec2> near_points;
  double weight = 0.0;
  for (const auto& rule : catalog.rules()) {
    if (rule.relation != Relation::kPrefersNear || !reference_matches(a, rule.subject)) continue;
    for (const auto& q : scene.placed) {
      const AssetRecord* qa = catalog.find(q.asset_id);
      if (q.room_id == room.room_id && qa && reference_matches(*qa, rule.object)) {
        near_points.push_back({q.pose.position.x, q.pose.position.y});
        weight = std::max(weight, rule.weight.value_or(1.0));
      }
    }
  }
  const bool bias = !near_points.empty() && rng.bernoulli(weight / (1.0 + weight));
  const std::size_t wanted = bias ? 4 : 1;
  std::vector<PlacedAsset> valid;

  for (int attempt = 0; attempt < kPoseBudget && valid.size() < wanted; ++attempt) {
    std::optional<PlacedAsset> cand;
    const std::size_t options = targets.size() + (floor ? 1 : 0) + (wall ? 1 : 0);
    const std::size_t pick = rng.index(options);
    if (pick < targets.size()) {
      cand = placer.sample_surface(a, *targets[pick], rng);
    } else if (floor) {
      cand = placer.sample_floor(a, room, rng, basic);
    } else {
      cand = placer.sample_wall(a, room, rng);
    }
    if (cand && placer.acceptable(*cand)) valid.push_back(*cand);
  }
  if (valid.empty()) return out;
  std::size_t best = 0;
  if (bias) {
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < valid.size(); ++i) {
      const Vec2 c{valid[i].pose.position.x, valid[i].pose.position.y};
      for (const Vec2& q : near_points) {
        const double d = length(c - q);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
    }
  }
  placer.commit(valid[best]);
  out.placed = true;
  return out;
}

// Places one instance of a catalog asset into a room, first satisfying any
// `requires` rule whose subject matches it.
inline void place_with_rules(Placer& placer, SceneGraph& scene, const Catalog& catalog,
                             const AssetRecord& a, const Room& room, Rng& rng, bool basic,
                             int depth = 0, const std::string* parent = nullptr) {
  if (depth > 4) throw RuleConflict("requires chain too deep at '" + a.asset_id + "'");
  for (const auto& rule : catalog.rules()) {
    if (rule.relation != Relation::kRequires || !reference_matches(a, rule.subject)) continue;
    if (placer.room_has(room, rule.object)) continue;
    std::vector<const AssetRecord*> options;
    for (const auto& b : catalog.assets()) {
      if (reference_matches(b, rule.object) && b.fits_room(room.room_type)) options.push_back(&b);
    }
    bool ok = false;
    Rng sub = rng.child("requires/" + rule.object);
    sub.shuffle(options);
    for (const AssetRecord* b : options) {
      if (placer.room_excludes(*b, room)) continue;
      try {
        place_with_rules(placer, scene, catalog, *b, room, sub, b->category == Category::kBasic,
                         depth + 1);
        ok = true;
        break;
      } catch (const PlacementExhausted&) {
      } catch (const SemanticMismatch&) {
      }
    }
    if (!ok) {
      throw RuleConflict("'" + a.asset_id + "' requires '" + rule.object + "' in " + room.room_id +
                         " but none can be placed");
    }
  }
  const PlaceOutcome r = try_place(placer, scene, catalog, a, room, rng, basic, parent);
  if (!r.had_target) {
    throw SemanticMismatch("no compatible support for '" + a.asset_id + "' in " + room.room_id);
  }
  if (!r.placed) {
    throw PlacementExhausted("no valid pose for '" + a.asset_id + "' in " + room.room_id +
                             " after " + std::to_string(kPoseBudget) + " attempts");
  }
}

}  // namespace furnish_detail

inline SceneGraph place_basic_assets(const FloorPlan& plan, const Catalog& catalog,
                                     std::uint64_t seed) {
  using namespace furnish_detail;
  SceneGraph scene;
  scene.plan = plan;
  scene.clearance = compute_clearance(plan);
  Placer placer(scene, catalog);
  std::vector<const Room*> rooms = placer.rooms();
  std::sort(rooms.begin(), rooms.end(),
            [](const Room* a, const Room* b) { return a->room_id < b->room_id; });
  const Rng base(seed, "furnish/basic");
  for (const Room* room : rooms) {
    Rng rng = base.child(room->room_id);
    for (const std::string& cls : mandatory_classes(room->room_type)) {
      std::vector<const AssetRecord*> options;
      for (const auto& a : catalog.assets()) {
        if (a.category == Category::kBasic && a.object_class == cls && a.fits_room(room->room_type)) {
          options.push_back(&a);
        }
      }
      if (options.empty()) {
        throw CatalogGap(std::string(to_string(room->room_type)) + " has no candidate for mandatory '" +
                         cls + "'");
      }
      rng.shuffle(options);
      // Smaller candidates are tried after the random pick so tight rooms still fit.
      std::stable_sort(options.begin() + 1, options.end(), [](const AssetRecord* x, const AssetRecord* y) {
        return x->bounds.x * x->bounds.y < y->bounds.x * y->bounds.y;
      });
      bool ok = false;
      std::string last;
      for (std::size_t k = 0; k < options.size() && k < 4 && !ok; ++k) {
        if (placer.room_excludes(*options[k], *room)) continue;
        try {
          place_with_rules(placer, scene, catalog, *options[k], *room, rng, true);
          ok = true;
        } catch (const PlacementExhausted& e) {
          last = options[k]->asset_id;
        }
      }
      if (!ok) {
        throw PlacementExhausted("no valid pose for mandatory '" + cls + "' (" + last + ") in " +
                                 room->room_id);
      }
    }
    for (const auto& extra : optional_extras(room->room_type)) {
      if (!rng.bernoulli(extra.probability)) continue;
      std::vector<const AssetRecord*> options;
      for (const auto& a : catalog.assets()) {
        if (a.category == Category::kBasic && a.object_class == extra.object_class &&
            a.fits_room(room->room_type)) {
          options.push_back(&a);
        }
      }
      if (options.empty()) continue;
      const AssetRecord* pick = options[rng.index(options.size())];
      if (placer.room_excludes(*pick, *room)) continue;
      const Checkpoint snapshot = checkpoint(scene);
      try {
        place_with_rules(placer, scene, catalog, *pick, *room, rng, true);
      } catch (const Error&) {
        rollback(scene, snapshot);
      }
    }
  }
  return scene;
}

// Plan check that rejects a floorplan unless each of `probes` trial
// furnishings fits the mandatory furniture. Keeps a reference to `catalog`.
inline PlanCheck furnishable(const Catalog& catalog, int probes = 3) {
  return [&catalog, probes](const FloorPlan& plan) -> std::string {
    for (int k = 0; k < probes; ++k) {
      const std::uint64_t s = derive_seed(plan.generation_seed, "layout/probe/" +
                                                                    std::to_string(plan.rejected_proposals) +
                                                                    "/" + std::to_string(k));
      try {
        place_basic_assets(plan, catalog, s);
      } catch (const PlacementExhausted& e) {
        return std::string("furnishing probe failed: ") + e.what();
      }
    }
    return {};
  };
}

// Matching catalog assets for a request selector.
inline std::vector<const AssetRecord*> resolve_selector(const Catalog& catalog,
                                                        std::string_view selector) {
  std::vector<const AssetRecord*> out;
  for (const auto& a : catalog.assets()) {
    if (reference_matches(a, selector)) out.push_back(&a);
  }
  return out;
}

// Places one asset of the catalog into the scene, trying compatible rooms in
// random order. `parent` pins the support to one placed instance.
inline std::string place_asset(SceneGraph& scene, const Catalog& catalog, const AssetRecord& a,
                               const std::optional<std::string>& room_selector, Rng& rng,
                               const std::string* parent = nullptr) {
  using namespace furnish_detail;
  Placer placer(scene, catalog);
  std::vector<const Room*> rooms;
  for (const Room* r : placer.rooms()) {
    if (!a.fits_room(r->room_type) || !room_matches(*r, room_selector)) continue;
    if (parent) {
      const PlacedAsset* p = scene.find(*parent);
      if (!p || p->room_id != r->room_id) continue;
    }
    rooms.push_back(r);
  }
  std::sort(rooms.begin(), rooms.end(),
            [](const Room* x, const Room* y) { return x->room_id < y->room_id; });
  rng.shuffle(rooms);
  bool any_target = false;
  bool any_excluded = false;
  std::string failure;
  for (const Room* room : rooms) {
    if (placer.room_excludes(a, *room)) {
      any_excluded = true;
      continue;
    }
    const Checkpoint snapshot = checkpoint(scene);
    try {
      place_with_rules(placer, scene, catalog, a, *room, rng, false, 0, parent);
      return scene.placed.back().instance_id;
    } catch (const SemanticMismatch&) {
      rollback(scene, snapshot);
    } catch (const PlacementExhausted& e) {
      rollback(scene, snapshot);
      any_target = true;
      failure = e.what();
    }
  }
  if (any_target) throw PlacementExhausted(failure);
  if (any_excluded && rooms.size() > 0) {
    throw RuleConflict("every candidate room for '" + a.asset_id + "' holds an excluded asset");
  }
  throw SemanticMismatch("no compatible surface for '" + a.asset_id + "' in this scene");
}

inline SceneGraph place_interactables(const SceneGraph& input, const Catalog& catalog,
                                      std::vector<PlacementRequest> request, std::uint64_t seed) {
  SceneGraph scene = input;
  std::sort(request.begin(), request.end());
  const Rng base(seed, "furnish/interactables");
  for (std::size_t k = 0; k < request.size(); ++k) {
    Rng rng = base.child(std::to_string(k));
    const auto& item = request[k];
    auto options = resolve_selector(catalog, item.selector);
    if (options.empty()) throw CatalogGap("no catalog asset matches '" + item.selector + "'");
    rng.shuffle(options);
    std::optional<Error> last;
    bool ok = false;
    for (std::size_t i = 0; i < options.size() && i < 5 && !ok; ++i) {
      try {
        place_asset(scene, catalog, *options[i], item.room, rng);
        ok = true;
      } catch (const PlacementExhausted& e) {
        if (!last || last->code() != "PlacementExhausted") last.emplace(e);
      } catch (const SemanticMismatch& e) {
        if (!last) last.emplace(e);
      } catch (const RuleConflict& e) {
        if (!last || last->code() == "SemanticMismatch") last.emplace(e);
      }
    }
    if (!ok) {
      const std::string msg = "request '" + item.selector + "': " + last->what();
      if (last->code() == "PlacementExhausted") throw PlacementExhausted(msg);
      if (last->code() == "RuleConflict") throw RuleConflict(msg);
      throw SemanticMismatch(msg);
    }
  }
  return scene;
}

// Rigid move of one instance and everything resting on it. The input scene
// is never modified.
inline SceneGraph apply_adjustment(const SceneGraph& input, const std::string& instance_id,
                                   const AdjustmentDelta& delta) {
  SceneGraph scene = input;
  auto it = std::find_if(scene.placed.begin(), scene.placed.end(),
                         [&](const PlacedAsset& p) { return p.instance_id == instance_id; });
  if (it == scene.placed.end()) throw InvalidAdjustment("unknown instance " + instance_id);
  const Vec3 move = delta.position.value_or(Vec3{});
  if (move.z != 0.0) throw InvalidAdjustment("support: vertical moves detach the asset");
  const double turn = delta.yaw ? std::fmod(*delta.yaw, kTwoPi) : 0.0;
  const Vec2 pivot{it->pose.position.x, it->pose.position.y};
  std::set<std::string> moved;
  for (auto& p : scene.placed) {
    if (p.instance_id != instance_id && !is_ancestor(scene, instance_id, p)) continue;
    moved.insert(p.instance_id);
    const Vec2 rel = Vec2{p.pose.position.x, p.pose.position.y} - pivot;
    const Vec2 rot = turn == 0.0 ? rel + pivot : to_world(pivot, turn, rel);
    p.pose.position.x = rot.x + move.x;
    p.pose.position.y = rot.y + move.y;
    if (turn != 0.0) p.pose.yaw = normalize_yaw(p.pose.yaw + turn);
  }
  for (const auto& p : scene.placed) {
    if (!moved.count(p.instance_id)) continue;
    const Room* room = scene.plan.find_room(p.room_id);
    if (!room || !inside_room(p, *room, 0.0)) throw InvalidAdjustment("room containment");
  }
  const PlacedAsset& target = *std::find_if(scene.placed.begin(), scene.placed.end(),
                                            [&](const PlacedAsset& p) { return p.instance_id == instance_id; });
  if (const PlacedAsset* owner = scene.find(target.parent)) {
    const SupportSurface* s = scene.surface_of(owner->instance_id);
    if (!s || !rect_within(target.footprint(), surface_world_rect(*owner, *s), 1e-9)) {
      throw InvalidAdjustment("support: asset would leave its supporting surface");
    }
  }
  for (const auto& p : scene.placed) {
    if (!moved.count(p.instance_id)) continue;
    if (blocks_clearance(scene, p)) throw InvalidAdjustment("clearance: blocks a door or walkway");
    for (const auto& q : scene.placed) {
      if (moved.count(q.instance_id)) continue;
      if (is_ancestor(scene, q.instance_id, p) || is_ancestor(scene, p.instance_id, q)) continue;
      if (assets_collide(p, q, 0.0)) {
        throw InvalidAdjustment("collision: " + p.instance_id + " would overlap " + q.instance_id);
      }
    }
  }
  return scene;
}

}  // namespace scenesmith
