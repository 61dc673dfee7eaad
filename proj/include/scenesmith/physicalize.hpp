#pragma once

// Rule-based physics annotation: colliders, friction, restitution, mass and
// articulation joints derived from catalog semantics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/rng.hpp"

namespace scenesmith {

struct FrictionRange {
  double lo;
  double hi;

  double mean() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Static friction is drawn uniformly from these ranges.
inline FrictionRange friction_range(MaterialClass mc) {
  switch (mc) {
    case MaterialClass::kWood:
      return {0.3, 0.5};
    case MaterialClass::kMetal:
      return {0.15, 0.25};
    case MaterialClass::kCeramic:
      return {0.25, 0.45};
    case MaterialClass::kFabric:
      return {0.5, 0.7};
    case MaterialClass::kPlastic:
      return {0.25, 0.35};
    case MaterialClass::kGlass:
      return {0.15, 0.25};
    case MaterialClass::kStone:
      return {0.4, 0.6};
    case MaterialClass::kOrganic:
      return {0.4, 0.6};
  }
  throw UnknownMaterialClass("material class index " + std::to_string(static_cast<int>(mc)));
}

inline constexpr double kDynamicFrictionRatio = 0.8;

inline double restitution_for(MaterialClass mc) {
  return mc == MaterialClass::kPlastic || mc == MaterialClass::kOrganic ? 0.3 : 0.1;
}

// kg/m^3, applied to a hollow-corrected volume.
inline double density_for(MaterialClass mc) {
  switch (mc) {
    case MaterialClass::kWood:
      return 600.0;
    case MaterialClass::kMetal:
      return 2500.0;
    case MaterialClass::kCeramic:
      return 2000.0;
    case MaterialClass::kFabric:
      return 200.0;
    case MaterialClass::kPlastic:
      return 400.0;
    case MaterialClass::kGlass:
      return 2200.0;
    case MaterialClass::kStone:
      return 2600.0;
    case MaterialClass::kOrganic:
      return 800.0;
  }
  throw UnknownMaterialClass("material class index " + std::to_string(static_cast<int>(mc)));
}

inline constexpr double kHollowFactor = 0.4;
inline constexpr double kButtonTravelLimit = 0.005;
inline constexpr double kDriveDamping = 0.5;

struct ColliderSpec {
  ColliderKind kind = ColliderKind::kConvexHull;
  std::string source;  // "bounds" or the asset's mesh_ref

  bool operator==(const ColliderSpec&) const = default;
};

struct PhysicsAnnotation {
  std::string instance_id;  // placed instance, wall id or floor:<room>
  ColliderSpec collider;
  double static_friction = 0.5;
  double dynamic_friction = 0.4;
  double restitution = 0.1;
  double mass = 1.0;
  bool dynamic = true;

  bool operator==(const PhysicsAnnotation&) const = default;
};

struct JointSpec {
  std::string instance_id;
  std::string part_id;
  JointType joint_type = JointType::kRevolute;
  Vec3 axis{0.0, 0.0, 1.0};
  double lower = 0.0;
  double upper = 1.0;
  double joint_friction = 0.0;
  double stiffness = 0.0;
  double damping = kDriveDamping;

  bool operator==(const JointSpec&) const = default;
};

inline ColliderSpec select_collider(const AssetRecord& a) {
  ColliderKind kind = ColliderKind::kConvexHull;
  if (a.articulation) {
    kind = ColliderKind::kConvexDecomposition;
  } else if (a.high_fidelity) {
    kind = ColliderKind::kSdfMesh;
  } else if (a.subtype == Subtype::kContainer || a.subtype == Subtype::kFurniture ||
             a.subtype == Subtype::kAppliance) {
    kind = ColliderKind::kConvexDecomposition;
  }
  return {kind, a.mesh_ref.empty() ? "bounds" : a.mesh_ref};
}

inline ColliderSpec architecture_collider() { return {ColliderKind::kBox, "bounds"}; }

inline double asset_mass(const AssetRecord& a) {
  if (a.mass_hint) return *a.mass_hint;
  return density_for(a.material_class) * kHollowFactor * a.bounds.x * a.bounds.y * a.bounds.z;
}

inline std::vector<PhysicsAnnotation> annotate_physics(const SceneGraph& scene, const Catalog& catalog,
                                                       std::uint64_t seed) {
  const Rng base(seed, "physics/materials");
  std::vector<PhysicsAnnotation> out;
  for (const auto& p : scene.placed) {
    const AssetRecord* a = catalog.find(p.asset_id);
    if (!a) throw InvariantViolation("placed asset " + p.instance_id + " has unknown asset_id");
    const FrictionRange range = friction_range(a->material_class);
    Rng rng = base.child(p.instance_id);
    PhysicsAnnotation ann;
    ann.instance_id = p.instance_id;
    ann.collider = select_collider(*a);
    ann.static_friction = rng.uniform(range.lo, range.hi);
    ann.dynamic_friction = kDynamicFrictionRatio * ann.static_friction;
    ann.restitution = restitution_for(a->material_class);
    ann.mass = asset_mass(*a);
    ann.dynamic = a->category == Category::kInteractable;
    out.push_back(ann);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.instance_id < y.instance_id;
  });
  return out;
}

// Static box annotations for walls and floors.
inline std::vector<PhysicsAnnotation> annotate_architecture(const FloorPlan& plan) {
  const FrictionRange stone = friction_range(MaterialClass::kStone);
  const double density = density_for(MaterialClass::kStone);
  const double wall_height = plan.spec.floor_height;
  std::vector<PhysicsAnnotation> out;
  auto add = [&](std::string id, double volume) {
    PhysicsAnnotation ann;
    ann.instance_id = std::move(id);
    ann.collider = architecture_collider();
    ann.static_friction = stone.mean();
    ann.dynamic_friction = kDynamicFrictionRatio * ann.static_friction;
    ann.restitution = restitution_for(MaterialClass::kStone);
    ann.mass = density * volume;
    ann.dynamic = false;
    out.push_back(ann);
  };
  for (const auto& level : plan.floors) {
    for (const auto& w : level.walls) add(w.wall_id, w.length() * w.thickness * wall_height);
    for (const auto& r : level.rooms) add("floor:" + r.room_id, polygon_area(r.polygon) * 0.2);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.instance_id < y.instance_id;
  });
  return out;
}

// Joint limits for one part of an owning asset.
inline JointSpec joint_for(const AssetRecord& a, const ArticulationPart& part) {
  JointSpec j;
  j.part_id = part.part_id;
  switch (part.joint) {
    case JointKindHint::kDoorLike:
      j.joint_type = JointType::kRevolute;
      j.axis = {0.0, 0.0, 1.0};
      j.upper = std::min(part.travel_hint * kPi / 180.0, kPi);
      break;
    case JointKindHint::kDrawerLike:
      j.joint_type = JointType::kPrismatic;
      j.axis = {0.0, 1.0, 0.0};
      j.upper = std::min(part.travel_hint, a.bounds.y);
      break;
    case JointKindHint::kButtonLike:
      j.joint_type = JointType::kPrismatic;
      j.axis = {0.0, -1.0, 0.0};
      j.upper = std::min({part.travel_hint, kButtonTravelLimit, a.bounds.y});
      break;
  }
  j.lower = 0.0;
  j.stiffness = 0.0;
  j.damping = kDriveDamping;
  return j;
}

inline std::vector<JointSpec> configure_joints(const SceneGraph& scene, const Catalog& catalog,
                                               std::uint64_t seed) {
  const Rng base(seed, "physics/joints");
  std::vector<JointSpec> out;
  for (const auto& p : scene.placed) {
    const AssetRecord* a = catalog.find(p.asset_id);
    if (!a) throw InvariantViolation("placed asset " + p.instance_id + " has unknown asset_id");
    if (!a->articulation) {
      if (a->category == Category::kInteractable && is_articulated_class(a->object_class)) {
        throw MissingTemplate("'" + a->asset_id + "' is a " + a->object_class +
                              " but has no articulation template");
      }
      continue;
    }
    const FrictionRange range = friction_range(a->material_class);
    for (const auto& part : a->articulation->parts) {
      JointSpec j = joint_for(*a, part);
      j.instance_id = p.instance_id;
      Rng rng = base.child(p.instance_id + "/" + part.part_id);
      j.joint_friction = rng.uniform(range.lo, range.hi);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end(), [](const JointSpec& x, const JointSpec& y) {
    return std::tie(x.instance_id, x.part_id) < std::tie(y.instance_id, y.part_id);
  });
  return out;
}

}  // namespace scenesmith
