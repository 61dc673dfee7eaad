#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace scenesmith {

enum class Category { kBasic, kInteractable };
enum class Subtype { kFurniture, kAppliance, kTool, kFood, kContainer, kDecor, kClothing, kOther };
enum class RoomType { kLivingRoom, kKitchen, kBedroom, kAny };
enum class MaterialClass { kWood, kMetal, kCeramic, kFabric, kPlastic, kGlass, kStone, kOrganic };
enum class PlacementTag { kOnFloor, kOnSurface, kOnBed, kHangable, kWallMounted, kInContainer };
enum class JointKindHint { kDoorLike, kDrawerLike, kButtonLike };
enum class MaterialFamily {
  kMarble, kBrick, kWoodGrain, kCeramicFinish, kFabricTexture, kMetallicCoating, kPaint, kTile
};
enum class Relation { kRequires, kExcludes, kPrefersNear };
enum class WallKind { kInterior, kExterior };
enum class OpeningKind { kDoor, kExteriorDoor };
enum class SupportKind { kFloor, kSurface, kBed, kWall, kInside };
enum class SurfaceKind { kTabletop, kShelf, kBedTop, kCounter, kRack, kInterior };
enum class LightKind { kCeiling, kLamp, kWindow };
enum class ColliderKind { kConvexHull, kConvexDecomposition, kSdfMesh, kBox };
enum class JointType { kRevolute, kPrismatic };
enum class Tier { kBasic, kMultistage };
enum class TaskCategory { kPickPlace, kOpenClose, kPushPull, kLivingRoom, kBedroom, kKitchen };
enum class RoleKind { kAsset, kOpening };
enum class PredicateKind { kIn, kOn, kJointAt, kDisplaced, kPressed };

template <typename E>
struct EnumNames;

#define SCENESMITH_ENUM_NAMES(E, ...)                                  \
  template <>                                                          \
  struct EnumNames<E> {                                                \
    static constexpr auto names = std::to_array<std::string_view>({__VA_ARGS__}); \
  };

SCENESMITH_ENUM_NAMES(Category, "basic", "interactable")
SCENESMITH_ENUM_NAMES(Subtype, "furniture", "appliance", "tool", "food", "container",
                      "decor", "clothing", "other")
SCENESMITH_ENUM_NAMES(RoomType, "living_room", "kitchen", "bedroom", "any")
SCENESMITH_ENUM_NAMES(MaterialClass, "wood", "metal", "ceramic", "fabric", "plastic",
                      "glass", "stone", "organic")
SCENESMITH_ENUM_NAMES(PlacementTag, "on_floor", "on_surface", "on_bed", "hangable",
                      "wall_mounted", "in_container")
SCENESMITH_ENUM_NAMES(JointKindHint, "door_like", "drawer_like", "button_like")
SCENESMITH_ENUM_NAMES(MaterialFamily, "marble", "brick", "wood_grain", "ceramic_finish",
                      "fabric_texture", "metallic_coating", "paint", "tile")
SCENESMITH_ENUM_NAMES(Relation, "requires", "excludes", "prefers_near")
SCENESMITH_ENUM_NAMES(WallKind, "interior", "exterior")
SCENESMITH_ENUM_NAMES(OpeningKind, "door", "exterior_door")
SCENESMITH_ENUM_NAMES(SupportKind, "floor", "surface", "bed", "wall", "inside")
SCENESMITH_ENUM_NAMES(SurfaceKind, "tabletop", "shelf", "bed_top", "counter", "rack",
                      "interior")
SCENESMITH_ENUM_NAMES(LightKind, "ceiling", "lamp", "window")
SCENESMITH_ENUM_NAMES(ColliderKind, "convex_hull", "convex_decomposition", "sdf_mesh", "box")
SCENESMITH_ENUM_NAMES(JointType, "revolute", "prismatic")
SCENESMITH_ENUM_NAMES(Tier, "basic", "multistage")
SCENESMITH_ENUM_NAMES(TaskCategory, "pick_place", "open_close", "push_pull", "living_room",
                      "bedroom", "kitchen")
SCENESMITH_ENUM_NAMES(RoleKind, "asset", "opening")
SCENESMITH_ENUM_NAMES(PredicateKind, "in", "on", "joint_at", "displaced", "pressed")

#undef SCENESMITH_ENUM_NAMES

template <typename E>
constexpr std::string_view to_string(E e) {
  return EnumNames<E>::names[static_cast<std::size_t>(e)];
}

template <typename E>
std::optional<E> parse_enum(std::string_view name) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <typename E>
constexpr std::size_t enum_count() {
  return EnumNames<E>::names.size();
}

// Concrete room types in canonical order (excludes `any`).
inline constexpr std::array<RoomType, 3> kRoomTypes = {
    RoomType::kLivingRoom, RoomType::kKitchen, RoomType::kBedroom};

}  // namespace scenesmith
