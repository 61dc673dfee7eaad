#pragma once

// Hand-made scene corruptions, one per invariant family. Each edits a valid
// document in place; the caller refreshes the content hash.

#include <functional>
#include <string>
#include <vector>

#include "scenesmith/scenesmith.hpp"

namespace corruptions {

struct Case {
  std::string name;
  std::string expected_code;
  std::function<void(scenesmith::SceneDocument&)> apply;
};

namespace detail {

using namespace scenesmith;

inline PlacedAsset& floor_asset(SceneDocument& d, std::size_t nth = 0) {
  for (auto& p : d.scene.placed) {
    if (p.support_kind == SupportKind::kFloor && nth-- == 0) return p;
  }
  throw std::runtime_error("scene has too few floor assets");
}

inline PlacedAsset& supported_asset(SceneDocument& d, Subtype subtype) {
  for (auto& p : d.scene.placed) {
    const AssetRecord* a = d.catalog_subset.find(p.asset_id);
    if (p.support_kind == SupportKind::kSurface && a && a->subtype == subtype) return p;
  }
  throw std::runtime_error("scene has no supported asset of the requested subtype");
}

}  // namespace detail

// Requires a single-floor document with at least two rooms, two floor assets
// sharing a room, food on a surface, and an articulated asset.
inline std::vector<Case> all() {
  using namespace scenesmith;
  using detail::floor_asset;
  return {
      {"room polygons overlap", "ROOM_OVERLAP",
       [](SceneDocument& d) {
         auto& rooms = d.scene.plan.floors[0].rooms;
         rooms[1].polygon = rooms[0].polygon;
         rooms[1].interior = rooms[0].interior;
       }},
      {"interior doors removed", "CONNECTIVITY",
       [](SceneDocument& d) {
         auto& ops = d.scene.plan.floors[0].openings;
         std::erase_if(ops, [](const Opening& o) { return o.kind == OpeningKind::kDoor; });
       }},
      {"slanted room edge", "ROOM_GEOMETRY",
       [](SceneDocument& d) { d.scene.plan.floors[0].rooms[0].polygon[0].x += 0.1; }},
      {"zero wall thickness", "WALL", [](SceneDocument& d) { d.scene.plan.floors[0].walls[0].thickness = 0.0; }},
      {"two assets stacked in place", "COLLISION",
       [](SceneDocument& d) {
         PlacedAsset& a = floor_asset(d, 0);
         for (auto& b : d.scene.placed) {
           if (&b != &a && b.support_kind == SupportKind::kFloor && b.room_id == a.room_id) {
             b.pose = a.pose;
             return;
           }
         }
         throw std::runtime_error("no second floor asset in the room");
       }},
      {"asset pushed outside its room", "CONTAINMENT",
       [](SceneDocument& d) { floor_asset(d).pose.position.x += 100.0; }},
      {"support parent missing", "SUPPORT",
       [](SceneDocument& d) { detail::supported_asset(d, Subtype::kFood).parent = "i9999"; }},
      {"food dropped on the floor", "SEMANTIC",
       [](SceneDocument& d) {
         PlacedAsset& p = detail::supported_asset(d, Subtype::kFood);
         p.support_kind = SupportKind::kFloor;
         p.parent = p.room_id;
         p.pose.position.z = d.scene.plan.elevation(p.floor_index);
       }},
      {"asset material on a wall", "MATERIAL",
       [](SceneDocument& d) {
         std::string wrong;
         for (const auto& m : d.catalog_subset.materials()) {
           if (!m.applicable_to.count("wall")) wrong = m.material_id;
         }
         const std::string wall = d.scene.plan.floors[0].walls[0].wall_id;
         for (auto& m : d.materials) {
           if (m.target == wall) m.material_id = wrong;
         }
       }},
      {"light too bright", "LIGHT", [](SceneDocument& d) { d.lights[0].intensity = 30000.0; }},
      {"friction out of range", "PHYSICS",
       [](SceneDocument& d) {
         for (auto& a : d.physics) {
           if (d.scene.find(a.instance_id)) {
             a.static_friction = 5.0;
             return;
           }
         }
       }},
      {"joint type flipped", "JOINT",
       [](SceneDocument& d) {
         auto& j = d.joints.at(0);
         j.joint_type = j.joint_type == JointType::kRevolute ? JointType::kPrismatic : JointType::kRevolute;
       }},
  };
}

}  // namespace corruptions
