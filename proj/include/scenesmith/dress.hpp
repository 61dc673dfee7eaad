#pragma once

// Material assignment for architecture and assets, and photometric lights.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/rng.hpp"

namespace scenesmith {

inline constexpr double kMinIntensity = 50.0;
inline constexpr double kMaxIntensity = 20000.0;
inline constexpr double kMinColorTemperature = 2700.0;
inline constexpr double kMaxColorTemperature = 6500.0;
inline constexpr double kMinExposure = -5.0;
inline constexpr double kMaxExposure = 5.0;

enum class DressProfile { kDefault, kDomainRandomized };

struct MaterialAssignment {
  std::string target;
  std::string material_id;

  bool operator==(const MaterialAssignment&) const = default;
};

struct LightSpec {
  std::string light_id;
  LightKind kind = LightKind::kCeiling;
  std::string room_id;
  Vec3 position;
  double intensity = 500.0;          // lux
  double color_temperature = 4000.0;  // kelvin
  double exposure = 0.0;

  bool operator==(const LightSpec&) const = default;
};

struct MaterialTarget {
  std::string target;
  std::string target_class;  // wall, floor, ceiling or asset:<material_class>
  std::string group;         // targets of one group share a material
};

inline std::string floor_target(std::string_view room_id) { return "floor:" + std::string(room_id); }
inline std::string ceiling_target(std::string_view room_id) {
  return "ceiling:" + std::string(room_id);
}

// Every surface that needs a material, in target order. Walls are grouped by
// the room that owns them (the lowest adjacent room id).
inline std::vector<MaterialTarget> material_targets(const SceneGraph& scene, const Catalog& catalog) {
  std::vector<MaterialTarget> out;
  for (const auto& level : scene.plan.floors) {
    for (const auto& w : level.walls) out.push_back({w.wall_id, "wall", "walls/" + w.room_a});
    for (const auto& r : level.rooms) {
      out.push_back({floor_target(r.room_id), "floor", floor_target(r.room_id)});
      out.push_back({ceiling_target(r.room_id), "ceiling", ceiling_target(r.room_id)});
    }
  }
  for (const auto& p : scene.placed) {
    const AssetRecord* a = catalog.find(p.asset_id);
    if (!a) throw InvariantViolation("placed asset " + p.instance_id + " has unknown asset_id");
    out.push_back({p.instance_id, asset_target_class(a->material_class), p.instance_id});
  }
  std::sort(out.begin(), out.end(),
            [](const MaterialTarget& a, const MaterialTarget& b) { return a.target < b.target; });
  return out;
}

// Families preferred by the default profile for each target class.
inline std::set<MaterialFamily> canonical_families(std::string_view target_class) {
  using F = MaterialFamily;
  if (target_class == "wall") return {F::kMarble, F::kBrick, F::kPaint, F::kTile};
  if (target_class == "floor") return {F::kWoodGrain, F::kMarble, F::kTile};
  if (target_class == "ceiling") return {F::kPaint};
  if (target_class == "asset:wood") return {F::kWoodGrain};
  if (target_class == "asset:metal") return {F::kMetallicCoating};
  if (target_class == "asset:ceramic") return {F::kCeramicFinish};
  if (target_class == "asset:fabric") return {F::kFabricTexture};
  if (target_class == "asset:stone") return {F::kMarble, F::kTile};
  return {};
}

inline std::vector<const MaterialRecord*> compatible_materials(const Catalog& catalog,
                                                               std::string_view target_class) {
  std::vector<const MaterialRecord*> out;
  for (const auto& m : catalog.materials()) {
    if (m.applicable_to.count(std::string(target_class))) out.push_back(&m);
  }
  return out;
}

inline std::vector<MaterialAssignment> assign_materials(
    const SceneGraph& scene, const Catalog& catalog, std::uint64_t seed,
    const std::map<std::string, std::string>& overrides = {},
    DressProfile profile = DressProfile::kDefault) {
  const auto targets = material_targets(scene, catalog);
  std::set<std::string> known;
  for (const auto& t : targets) known.insert(t.target);
  for (const auto& [target, mid] : overrides) {
    if (!known.count(target)) throw IncompatibleOverride("override names unknown target " + target);
  }
  const Rng base(seed, "dress/materials");
  std::map<std::string, std::string> group_choice;
  std::vector<MaterialAssignment> out;
  for (const auto& t : targets) {
    auto ov = overrides.find(t.target);
    if (ov != overrides.end()) {
      const MaterialRecord* m = catalog.find_material(ov->second);
      if (!m || !m->applicable_to.count(t.target_class)) {
        throw IncompatibleOverride("material '" + ov->second + "' is not applicable to " +
                                   t.target + " (" + t.target_class + ")");
      }
      out.push_back({t.target, m->material_id});
      continue;
    }
    auto chosen = group_choice.find(t.group);
    if (chosen == group_choice.end()) {
      auto options = compatible_materials(catalog, t.target_class);
      if (options.empty()) {
        throw NoCompatibleMaterial("no material for " + t.target + " (" + t.target_class + ")");
      }
      if (profile == DressProfile::kDefault) {
        const auto families = canonical_families(t.target_class);
        std::vector<const MaterialRecord*> preferred;
        for (const auto* m : options) {
          if (families.count(m->family)) preferred.push_back(m);
        }
        if (!preferred.empty()) options = preferred;
      }
      Rng rng = base.child(t.group);
      chosen = group_choice.emplace(t.group, options[rng.index(options.size())]->material_id).first;
    }
    out.push_back({t.target, chosen->second});
  }
  return out;
}

namespace dress_detail {

inline Vec2 light_anchor(const Room& room) {
  const Vec2 c = polygon_centroid(room.interior);
  if (point_in_polygon(room.interior, c)) return c;
  const auto pieces = decompose_rectilinear(room.interior);
  const Rect2* best = &pieces.front();
  for (const auto& r : pieces) {
    if (r.area() > best->area() + 1e-12) best = &r;
  }
  return best->center();
}

inline void sample_photometry(LightSpec& l, Rng& rng, DressProfile profile) {
  l.intensity = rng.log_uniform(kMinIntensity, kMaxIntensity);
  l.color_temperature = rng.uniform(kMinColorTemperature, kMaxColorTemperature);
  l.exposure = profile == DressProfile::kDefault
                   ? 0.0
                   : rng.triangular(kMinExposure, 0.0, kMaxExposure);
}

}  // namespace dress_detail

// One ceiling light per room at the interior centroid (or the centre of the
// largest rectangle when the centroid falls outside an L-shape), a window
// light on some exterior walls, and a lamp above some bedside tables.
inline std::vector<LightSpec> place_lights(const SceneGraph& scene, std::uint64_t seed,
                                           DressProfile profile = DressProfile::kDefault) {
  const Rng base(seed, "dress/lights");
  std::vector<LightSpec> out;
  const FloorPlan& plan = scene.plan;
  for (const Room* room : plan.all_rooms()) {
    Rng rng = base.child(room->room_id);
    const double floor_z = plan.elevation(room->floor_index);
    int k = 0;
    auto next_id = [&] { return room->room_id + "_light" + std::to_string(k++); };

    LightSpec ceiling;
    ceiling.light_id = next_id();
    ceiling.kind = LightKind::kCeiling;
    ceiling.room_id = room->room_id;
    const Vec2 c = dress_detail::light_anchor(*room);
    ceiling.position = {c.x, c.y, floor_z + plan.spec.floor_height - 0.05};
    dress_detail::sample_photometry(ceiling, rng, profile);
    out.push_back(ceiling);

    if (rng.bernoulli(0.5)) {
      const WallSegment* longest = nullptr;
      for (const auto& level : plan.floors) {
        for (const auto& w : level.walls) {
          if (w.kind == WallKind::kExterior && w.room_a == room->room_id &&
              (!longest || w.length() > longest->length() + 1e-12)) {
            longest = &w;
          }
        }
      }
      if (longest) {
        const Vec2 mid = (longest->a + longest->b) * 0.5;
        Vec2 n = longest->horizontal() ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
        if (!point_in_polygon(room->interior, mid + n * 0.3)) n = n * -1.0;
        const Vec2 p = mid + n * 0.3;
        LightSpec win;
        win.light_id = next_id();
        win.kind = LightKind::kWindow;
        win.room_id = room->room_id;
        win.position = {p.x, p.y, floor_z + 1.5};
        dress_detail::sample_photometry(win, rng, profile);
        out.push_back(win);
      }
    }

    for (const auto& p : scene.placed) {
      if (p.room_id != room->room_id || p.support_kind != SupportKind::kFloor) continue;
      const SupportSurface* s = scene.surface_of(p.instance_id);
      if (!s || s->kind != SurfaceKind::kTabletop || p.size.z > 0.65) continue;
      if (!rng.bernoulli(0.5)) continue;
      LightSpec lamp;
      lamp.light_id = next_id();
      lamp.kind = LightKind::kLamp;
      lamp.room_id = room->room_id;
      lamp.position = {p.pose.position.x, p.pose.position.y, p.z_max() + 0.4};
      dress_detail::sample_photometry(lamp, rng, profile);
      out.push_back(lamp);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LightSpec& a, const LightSpec& b) { return a.light_id < b.light_id; });
  return out;
}

}  // namespace scenesmith
