#pragma once

// Scene documents: canonical serialization, content hashing, full invariant
// re-validation, SVG floorplan previews and summary statistics.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/dress.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/json_util.hpp"
#include "scenesmith/layout.hpp"
#include "scenesmith/physicalize.hpp"

namespace scenesmith {

inline constexpr std::string_view kSceneSchema = "agentworld-scene/1";
inline constexpr std::string_view kEngineVersion = "scenesmith 0.1.0";

struct GenerationHeader {
  std::uint64_t seed = 0;         // variant seed: furnish, materials, physics
  std::uint64_t layout_seed = 0;  // base layout seed
  std::string engine_version{kEngineVersion};
  std::string scene_key;
  DressProfile profile = DressProfile::kDefault;

  bool operator==(const GenerationHeader&) const = default;
};

struct SceneDocument {
  std::string schema_version{kSceneSchema};
  GenerationHeader generation;
  SceneGraph scene;
  std::vector<MaterialAssignment> materials;
  std::vector<LightSpec> lights;
  std::vector<PhysicsAnnotation> physics;
  std::vector<JointSpec> joints;
  Catalog catalog_subset;
  std::string content_hash;

  bool operator==(const SceneDocument&) const = default;
};

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

// Sorted keys (std::map-backed objects), two-space indent, LF line ends,
// shortest round-trip numbers, trailing newline.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// JSON mapping

namespace scene_json {

inline Json vec2(Vec2 v) { return Json::array({v.x, v.y}); }
inline Json vec3(Vec3 v) { return {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }
inline Json polygon(const Polygon& p) {
  Json a = Json::array();
  for (Vec2 v : p) a.push_back(vec2(v));
  return a;
}
inline Polygon rect_polygon(const Rect2& r) {
  return {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
}

inline Vec2 vec2_from(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2) throw ParseError(ctx + ": expected [x, y]");
  return {as_number(j[0], "x", ctx), as_number(j[1], "y", ctx)};
}
inline Vec3 vec3_from(const Json& j, const std::string& ctx) {
  return {get_number(j, "x", ctx), get_number(j, "y", ctx), get_number(j, "z", ctx)};
}
inline Polygon polygon_from(const Json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected a point list");
  Polygon p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(vec2_from(j[i], ctx));
  return p;
}
inline Rect2 rect_from(const Json& j, const std::string& ctx) {
  const Polygon p = polygon_from(j, ctx);
  if (p.size() != 4) throw ParseError(ctx + ": expected a 4-point rectangle");
  return bounding_box(p);
}

inline Json to_json(const LayoutSpec& s) {
  Json rooms = Json::array();
  for (RoomType r : s.rooms_requested) rooms.push_back(to_string(r));
  Json areas = Json::object();
  for (const auto& [t, a] : s.thresholds.min_room_area) areas[std::string(to_string(t))] = a;
  return {{"rooms_requested", rooms},
          {"floors", s.floors},
          {"footprint", {{"width", s.width}, {"depth", s.depth}}},
          {"grid_resolution", s.grid_resolution},
          {"thresholds",
           {{"max_aspect_ratio", s.thresholds.max_aspect_ratio},
            {"min_fill_ratio", s.thresholds.min_fill_ratio},
            {"min_room_area", areas}}},
          {"wall_thickness",
           {{"interior", s.interior_wall_thickness}, {"exterior", s.exterior_wall_thickness}}},
          {"floor_height", s.floor_height},
          {"proposal_budget", s.proposal_budget}};
}

inline LayoutSpec spec_from(const Json& j, const std::string& ctx) {
  LayoutSpec s;
  for (const Json& r : get_array(j, "rooms_requested", ctx)) {
    s.rooms_requested.push_back(enum_from_json<RoomType>(r, "rooms_requested", ctx));
  }
  s.floors = static_cast<int>(get_int(j, "floors", ctx));
  const Json& fp = require(j, "footprint", ctx);
  s.width = get_number(fp, "width", ctx + ".footprint");
  s.depth = get_number(fp, "depth", ctx + ".footprint");
  s.grid_resolution = get_number(j, "grid_resolution", ctx);
  const Json& t = require(j, "thresholds", ctx);
  s.thresholds.max_aspect_ratio = get_number(t, "max_aspect_ratio", ctx + ".thresholds");
  s.thresholds.min_fill_ratio = get_number(t, "min_fill_ratio", ctx + ".thresholds");
  s.thresholds.min_room_area.clear();
  const Json& areas = require(t, "min_room_area", ctx + ".thresholds");
  if (!areas.is_object()) throw ParseError(ctx + ".thresholds.min_room_area must be an object");
  for (auto it = areas.begin(); it != areas.end(); ++it) {
    auto rt = parse_enum<RoomType>(it.key());
    if (!rt) throw ParseError(ctx + ": unknown room type '" + it.key() + "'");
    s.thresholds.min_room_area[*rt] = as_number(it.value(), it.key(), ctx);
  }
  const Json& w = require(j, "wall_thickness", ctx);
  s.interior_wall_thickness = get_number(w, "interior", ctx + ".wall_thickness");
  s.exterior_wall_thickness = get_number(w, "exterior", ctx + ".wall_thickness");
  s.floor_height = get_number(j, "floor_height", ctx);
  s.proposal_budget = static_cast<int>(get_int(j, "proposal_budget", ctx));
  return s;
}

inline Json to_json(const FloorPlan& plan) {
  Json floors = Json::array();
  for (const auto& f : plan.floors) {
    Json rooms = Json::array();
    for (const auto& r : f.rooms) {
      rooms.push_back({{"room_id", r.room_id},
                       {"room_type", to_string(r.room_type)},
                       {"floor_index", r.floor_index},
                       {"polygon", polygon(r.polygon)},
                       {"interior", polygon(r.interior)}});
    }
    Json walls = Json::array();
    for (const auto& w : f.walls) {
      walls.push_back({{"wall_id", w.wall_id},
                       {"endpoints", Json::array({vec2(w.a), vec2(w.b)})},
                       {"thickness", w.thickness},
                       {"floor_index", w.floor_index},
                       {"kind", to_string(w.kind)},
                       {"rooms", Json::array({w.room_a, w.room_b})}});
    }
    Json openings = Json::array();
    for (const auto& o : f.openings) {
      openings.push_back({{"opening_id", o.opening_id},
                          {"kind", to_string(o.kind)},
                          {"wall_ref", o.wall_id},
                          {"floor_index", o.floor_index},
                          {"center", vec2(o.center)},
                          {"width", o.width},
                          {"height", o.height},
                          {"connects", Json::array({o.room_a, o.room_b})}});
    }
    Json cutouts = Json::array();
    for (const auto& c : f.ceiling_cutouts) cutouts.push_back(polygon(rect_polygon(c)));
    floors.push_back({{"index", f.index},
                      {"rooms", rooms},
                      {"walls", walls},
                      {"openings", openings},
                      {"ceiling_cutouts", cutouts}});
  }
  Json stairs = Json::array();
  for (const auto& s : plan.staircases) {
    stairs.push_back({{"staircase_id", s.staircase_id},
                      {"footprint", polygon(rect_polygon(s.footprint))},
                      {"lower_floor", s.lower_floor},
                      {"upper_floor", s.upper_floor},
                      {"lower_room", s.lower_room},
                      {"upper_room", s.upper_room},
                      {"run_direction", s.run_direction}});
  }
  Json metrics = Json::object();
  for (const auto& [id, m] : plan.metrics) {
    metrics[id] = {{"aspect_ratio", m.aspect_ratio}, {"fill_ratio", m.fill_ratio}};
  }
  return {{"spec", to_json(plan.spec)},
          {"generation_seed", plan.generation_seed},
          {"rejected_proposals", plan.rejected_proposals},
          {"floors", floors},
          {"staircases", stairs},
          {"metrics", metrics}};
}

inline std::pair<std::string, std::string> pair_from(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw ParseError(ctx + ": expected a pair of ids");
  }
  return {j[0].get<std::string>(), j[1].get<std::string>()};
}

inline FloorPlan floorplan_from(const Json& j, const std::string& ctx) {
  FloorPlan plan;
  plan.spec = spec_from(require(j, "spec", ctx), ctx + ".spec");
  plan.generation_seed = get_u64(j, "generation_seed", ctx);
  plan.rejected_proposals = static_cast<int>(get_int(j, "rejected_proposals", ctx));
  const Json& floors = get_array(j, "floors", ctx);
  for (std::size_t fi = 0; fi < floors.size(); ++fi) {
    const std::string fc = ctx + ".floors[" + std::to_string(fi) + "]";
    const Json& fj = floors[fi];
    FloorLevel level;
    level.index = static_cast<int>(get_int(fj, "index", fc));
    const Json& rooms = get_array(fj, "rooms", fc);
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      const std::string c = fc + ".rooms[" + std::to_string(i) + "]";
      Room r;
      r.room_id = get_string(rooms[i], "room_id", c);
      r.room_type = get_enum<RoomType>(rooms[i], "room_type", c);
      r.floor_index = static_cast<int>(get_int(rooms[i], "floor_index", c));
      r.polygon = polygon_from(require(rooms[i], "polygon", c), c + ".polygon");
      r.interior = polygon_from(require(rooms[i], "interior", c), c + ".interior");
      level.rooms.push_back(std::move(r));
    }
    const Json& walls = get_array(fj, "walls", fc);
    for (std::size_t i = 0; i < walls.size(); ++i) {
      const std::string c = fc + ".walls[" + std::to_string(i) + "]";
      WallSegment w;
      w.wall_id = get_string(walls[i], "wall_id", c);
      const Json& ends = get_array(walls[i], "endpoints", c);
      if (ends.size() != 2) throw ParseError(c + ": endpoints must hold two points");
      w.a = vec2_from(ends[0], c + ".endpoints");
      w.b = vec2_from(ends[1], c + ".endpoints");
      w.thickness = get_number(walls[i], "thickness", c);
      w.floor_index = static_cast<int>(get_int(walls[i], "floor_index", c));
      w.kind = get_enum<WallKind>(walls[i], "kind", c);
      std::tie(w.room_a, w.room_b) = pair_from(require(walls[i], "rooms", c), c + ".rooms");
      level.walls.push_back(std::move(w));
    }
    const Json& openings = get_array(fj, "openings", fc);
    for (std::size_t i = 0; i < openings.size(); ++i) {
      const std::string c = fc + ".openings[" + std::to_string(i) + "]";
      Opening o;
      o.opening_id = get_string(openings[i], "opening_id", c);
      o.kind = get_enum<OpeningKind>(openings[i], "kind", c);
      o.wall_id = get_string(openings[i], "wall_ref", c);
      o.floor_index = static_cast<int>(get_int(openings[i], "floor_index", c));
      o.center = vec2_from(require(openings[i], "center", c), c + ".center");
      o.width = get_number(openings[i], "width", c);
      o.height = get_number(openings[i], "height", c);
      std::tie(o.room_a, o.room_b) = pair_from(require(openings[i], "connects", c), c + ".connects");
      level.openings.push_back(std::move(o));
    }
    for (const Json& cut : get_array(fj, "ceiling_cutouts", fc)) {
      level.ceiling_cutouts.push_back(rect_from(cut, fc + ".ceiling_cutouts"));
    }
    plan.floors.push_back(std::move(level));
  }
  const Json& stairs = get_array(j, "staircases", ctx);
  for (std::size_t i = 0; i < stairs.size(); ++i) {
    const std::string c = ctx + ".staircases[" + std::to_string(i) + "]";
    Staircase s;
    s.staircase_id = get_string(stairs[i], "staircase_id", c);
    s.footprint = rect_from(require(stairs[i], "footprint", c), c + ".footprint");
    s.lower_floor = static_cast<int>(get_int(stairs[i], "lower_floor", c));
    s.upper_floor = static_cast<int>(get_int(stairs[i], "upper_floor", c));
    s.lower_room = get_string(stairs[i], "lower_room", c);
    s.upper_room = get_string(stairs[i], "upper_room", c);
    s.run_direction = get_string(stairs[i], "run_direction", c);
    plan.staircases.push_back(std::move(s));
  }
  const Json& metrics = require(j, "metrics", ctx);
  if (!metrics.is_object()) throw ParseError(ctx + ".metrics must be an object");
  for (auto it = metrics.begin(); it != metrics.end(); ++it) {
    const std::string c = ctx + ".metrics." + it.key();
    plan.metrics[it.key()] = {get_number(it.value(), "aspect_ratio", c),
                              get_number(it.value(), "fill_ratio", c)};
  }
  return plan;
}

inline Json to_json(const PlacedAsset& p) {
  return {{"instance_id", p.instance_id},
          {"asset_id", p.asset_id},
          {"pose", {{"position", vec3(p.pose.position)}, {"yaw", p.pose.yaw}}},
          {"parent", p.parent},
          {"support_kind", to_string(p.support_kind)},
          {"room_id", p.room_id},
          {"floor_index", p.floor_index},
          {"size", vec3(p.size)}};
}

inline PlacedAsset placed_from(const Json& j, const std::string& c) {
  PlacedAsset p;
  p.instance_id = get_string(j, "instance_id", c);
  p.asset_id = get_string(j, "asset_id", c);
  const Json& pose = require(j, "pose", c);
  p.pose.position = vec3_from(require(pose, "position", c + ".pose"), c + ".pose.position");
  p.pose.yaw = get_number(pose, "yaw", c + ".pose");
  p.parent = get_string(j, "parent", c);
  p.support_kind = get_enum<SupportKind>(j, "support_kind", c);
  p.room_id = get_string(j, "room_id", c);
  p.floor_index = static_cast<int>(get_int(j, "floor_index", c));
  p.size = vec3_from(require(j, "size", c), c + ".size");
  return p;
}

inline Json to_json(const SupportSurface& s) {
  Json j{{"owner", s.owner},
         {"kind", to_string(s.kind)},
         {"polygon", polygon(s.polygon)},
         {"height", s.height}};
  if (s.max_item_height) j["max_item_height"] = *s.max_item_height;
  return j;
}

inline SupportSurface surface_from(const Json& j, const std::string& c) {
  SupportSurface s;
  s.owner = get_string(j, "owner", c);
  s.kind = get_enum<SurfaceKind>(j, "kind", c);
  s.polygon = polygon_from(require(j, "polygon", c), c + ".polygon");
  s.height = get_number(j, "height", c);
  if (j.contains("max_item_height")) s.max_item_height = get_number(j, "max_item_height", c);
  return s;
}

inline Json to_json(const LightSpec& l) {
  return {{"light_id", l.light_id},
          {"kind", to_string(l.kind)},
          {"room_id", l.room_id},
          {"position", vec3(l.position)},
          {"intensity", l.intensity},
          {"color_temperature", l.color_temperature},
          {"exposure", l.exposure}};
}

inline LightSpec light_from(const Json& j, const std::string& c) {
  LightSpec l;
  l.light_id = get_string(j, "light_id", c);
  l.kind = get_enum<LightKind>(j, "kind", c);
  l.room_id = get_string(j, "room_id", c);
  l.position = vec3_from(require(j, "position", c), c + ".position");
  l.intensity = get_number(j, "intensity", c);
  l.color_temperature = get_number(j, "color_temperature", c);
  l.exposure = get_number(j, "exposure", c);
  return l;
}

inline Json to_json(const PhysicsAnnotation& a) {
  return {{"instance_id", a.instance_id},
          {"collider", {{"kind", to_string(a.collider.kind)}, {"source", a.collider.source}}},
          {"static_friction", a.static_friction},
          {"dynamic_friction", a.dynamic_friction},
          {"restitution", a.restitution},
          {"mass", a.mass},
          {"dynamic", a.dynamic}};
}

inline PhysicsAnnotation physics_from(const Json& j, const std::string& c) {
  PhysicsAnnotation a;
  a.instance_id = get_string(j, "instance_id", c);
  const Json& col = require(j, "collider", c);
  a.collider.kind = get_enum<ColliderKind>(col, "kind", c + ".collider");
  a.collider.source = get_string(col, "source", c + ".collider");
  a.static_friction = get_number(j, "static_friction", c);
  a.dynamic_friction = get_number(j, "dynamic_friction", c);
  a.restitution = get_number(j, "restitution", c);
  a.mass = get_number(j, "mass", c);
  a.dynamic = get_bool(j, "dynamic", c);
  return a;
}

inline Json to_json(const JointSpec& s) {
  return {{"instance_id", s.instance_id},
          {"part_id", s.part_id},
          {"joint_type", to_string(s.joint_type)},
          {"axis", Json::array({s.axis.x, s.axis.y, s.axis.z})},
          {"limits", Json::array({s.lower, s.upper})},
          {"joint_friction", s.joint_friction},
          {"drive", {{"stiffness", s.stiffness}, {"damping", s.damping}}}};
}

inline JointSpec joint_from(const Json& j, const std::string& c) {
  JointSpec s;
  s.instance_id = get_string(j, "instance_id", c);
  s.part_id = get_string(j, "part_id", c);
  s.joint_type = get_enum<JointType>(j, "joint_type", c);
  const Json& axis = get_array(j, "axis", c);
  if (axis.size() != 3) throw ParseError(c + ": axis must have 3 entries");
  s.axis = {as_number(axis[0], "axis", c), as_number(axis[1], "axis", c),
            as_number(axis[2], "axis", c)};
  const Json& lim = get_array(j, "limits", c);
  if (lim.size() != 2) throw ParseError(c + ": limits must have 2 entries");
  s.lower = as_number(lim[0], "limits", c);
  s.upper = as_number(lim[1], "limits", c);
  s.joint_friction = get_number(j, "joint_friction", c);
  const Json& d = require(j, "drive", c);
  s.stiffness = get_number(d, "stiffness", c + ".drive");
  s.damping = get_number(d, "damping", c + ".drive");
  return s;
}

inline std::string_view profile_name(DressProfile p) {
  return p == DressProfile::kDefault ? "default" : "domain_randomized";
}

}  // namespace scene_json

// Sorts every list into its canonical order.
inline void canonicalize(SceneDocument& doc) {
  auto by = [](auto key) {
    return [key](const auto& a, const auto& b) { return key(a) < key(b); };
  };
  auto& plan = doc.scene.plan;
  std::sort(plan.floors.begin(), plan.floors.end(), by([](const FloorLevel& f) { return f.index; }));
  for (auto& f : plan.floors) {
    std::sort(f.rooms.begin(), f.rooms.end(), by([](const Room& r) { return r.room_id; }));
    std::sort(f.walls.begin(), f.walls.end(), by([](const WallSegment& w) { return w.wall_id; }));
    std::sort(f.openings.begin(), f.openings.end(),
              by([](const Opening& o) { return o.opening_id; }));
  }
  std::sort(plan.staircases.begin(), plan.staircases.end(),
            by([](const Staircase& s) { return s.staircase_id; }));
  std::sort(doc.scene.placed.begin(), doc.scene.placed.end(),
            by([](const PlacedAsset& p) { return p.instance_id; }));
  std::sort(doc.scene.surfaces.begin(), doc.scene.surfaces.end(),
            by([](const SupportSurface& s) { return s.owner; }));
  std::sort(doc.materials.begin(), doc.materials.end(),
            by([](const MaterialAssignment& m) { return m.target; }));
  std::sort(doc.lights.begin(), doc.lights.end(), by([](const LightSpec& l) { return l.light_id; }));
  std::sort(doc.physics.begin(), doc.physics.end(),
            by([](const PhysicsAnnotation& a) { return a.instance_id; }));
  std::sort(doc.joints.begin(), doc.joints.end(), by([](const JointSpec& j) {
              return std::make_pair(j.instance_id, j.part_id);
            }));
}

// Document body without content_hash, lists in canonical order.
inline Json scene_body_json(const SceneDocument& input) {
  using namespace scene_json;
  SceneDocument doc = input;
  canonicalize(doc);
  Json placed = Json::array();
  for (const auto& p : doc.scene.placed) placed.push_back(to_json(p));
  Json surfaces = Json::array();
  for (const auto& s : doc.scene.surfaces) surfaces.push_back(to_json(s));
  Json materials = Json::array();
  for (const auto& m : doc.materials) {
    materials.push_back({{"target", m.target}, {"material_id", m.material_id}});
  }
  Json lights = Json::array();
  for (const auto& l : doc.lights) lights.push_back(to_json(l));
  Json physics = Json::array();
  for (const auto& a : doc.physics) physics.push_back(to_json(a));
  Json joints = Json::array();
  for (const auto& s : doc.joints) joints.push_back(to_json(s));
  Json generation{{"seed", doc.generation.seed},
                  {"layout_seed", doc.generation.layout_seed},
                  {"engine_version", doc.generation.engine_version},
                  {"scene_key", doc.generation.scene_key},
                  {"profile", profile_name(doc.generation.profile)},
                  {"spec", to_json(doc.scene.plan.spec)}};
  return {{"schema_version", doc.schema_version},
          {"generation", generation},
          {"floorplan", to_json(doc.scene.plan)},
          {"scene", {{"placed", placed}, {"surfaces", surfaces}}},
          {"materials", materials},
          {"lights", lights},
          {"physics", physics},
          {"joints", joints},
          {"catalog_subset", to_json(doc.catalog_subset)}};
}

inline std::string compute_content_hash(const SceneDocument& doc) {
  return sha256_hex(canonical_dump(scene_body_json(doc)));
}

// Canonical order plus a fresh content hash.
inline void finalize(SceneDocument& doc) {
  canonicalize(doc);
  doc.content_hash = compute_content_hash(doc);
}

inline std::string serialize_scene(const SceneDocument& doc) {
  Json j = scene_body_json(doc);
  j["content_hash"] = doc.content_hash;
  return canonical_dump(j);
}

inline SceneDocument scene_from_json(const Json& j) {
  using namespace scene_json;
  if (!j.is_object()) throw ParseError("scene: top level must be an object");
  SceneDocument doc;
  doc.schema_version = get_string(j, "schema_version", "scene");
  if (doc.schema_version != kSceneSchema) {
    throw ParseError("scene: unsupported schema_version '" + doc.schema_version + "'");
  }
  const Json& g = require(j, "generation", "scene");
  doc.generation.seed = get_u64(g, "seed", "generation");
  doc.generation.layout_seed = get_u64(g, "layout_seed", "generation");
  doc.generation.engine_version = get_string(g, "engine_version", "generation");
  doc.generation.scene_key = get_string(g, "scene_key", "generation");
  const std::string profile = get_string(g, "profile", "generation");
  if (profile == "default") {
    doc.generation.profile = DressProfile::kDefault;
  } else if (profile == "domain_randomized") {
    doc.generation.profile = DressProfile::kDomainRandomized;
  } else {
    throw ParseError("generation: unknown profile '" + profile + "'");
  }
  const LayoutSpec header_spec = spec_from(require(g, "spec", "generation"), "generation.spec");
  doc.scene.plan = floorplan_from(require(j, "floorplan", "scene"), "floorplan");
  if (!(header_spec == doc.scene.plan.spec)) {
    throw ParseError("generation.spec differs from floorplan.spec");
  }
  const Json& sc = require(j, "scene", "scene");
  const Json& placed = get_array(sc, "placed", "scene");
  for (std::size_t i = 0; i < placed.size(); ++i) {
    doc.scene.placed.push_back(placed_from(placed[i], "scene.placed[" + std::to_string(i) + "]"));
  }
  const Json& surfaces = get_array(sc, "surfaces", "scene");
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    doc.scene.surfaces.push_back(
        surface_from(surfaces[i], "scene.surfaces[" + std::to_string(i) + "]"));
  }
  doc.scene.clearance = compute_clearance(doc.scene.plan);
  const Json& mats = get_array(j, "materials", "scene");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const std::string c = "materials[" + std::to_string(i) + "]";
    doc.materials.push_back({get_string(mats[i], "target", c), get_string(mats[i], "material_id", c)});
  }
  const Json& lights = get_array(j, "lights", "scene");
  for (std::size_t i = 0; i < lights.size(); ++i) {
    doc.lights.push_back(light_from(lights[i], "lights[" + std::to_string(i) + "]"));
  }
  const Json& physics = get_array(j, "physics", "scene");
  for (std::size_t i = 0; i < physics.size(); ++i) {
    doc.physics.push_back(physics_from(physics[i], "physics[" + std::to_string(i) + "]"));
  }
  const Json& joints = get_array(j, "joints", "scene");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    doc.joints.push_back(joint_from(joints[i], "joints[" + std::to_string(i) + "]"));
  }
  doc.catalog_subset = catalog_from_json(require(j, "catalog_subset", "scene"));
  doc.content_hash = get_string(j, "content_hash", "scene");
  return doc;
}

inline SceneDocument parse_scene(std::string_view bytes) {
  return scene_from_json(parse_json_text(bytes, "scene"));
}

// ---------------------------------------------------------------------------
// Validation

namespace validate_detail {

inline std::string idx(std::string_view list, std::size_t i) {
  return std::string(list) + "[" + std::to_string(i) + "]";
}

inline bool on_grid(double v, double res) {
  const double q = v / res;
  return std::abs(q - std::round(q)) < 1e-6;
}

inline double overlap_area(const Polygon& a, const Polygon& b) {
  double total = 0.0;
  for (const Rect2& ra : decompose_rectilinear(a)) {
    for (const Rect2& rb : decompose_rectilinear(b)) {
      const double w = std::min(ra.max.x, rb.max.x) - std::max(ra.min.x, rb.min.x);
      const double h = std::min(ra.max.y, rb.max.y) - std::max(ra.min.y, rb.min.y);
      if (w > 0.0 && h > 0.0) total += w * h;
    }
  }
  return total;
}

inline void check_layout(const FloorPlan& plan, ValidationReport& r) {
  const double res = plan.spec.grid_resolution;
  std::set<std::string> room_ids;
  for (std::size_t fi = 0; fi < plan.floors.size(); ++fi) {
    const FloorLevel& f = plan.floors[fi];
    const std::string fp = idx("floorplan.floors", fi);
    if (f.index != static_cast<int>(fi)) r.error("SCHEMA", fp + ".index", "floor index out of sequence");
    for (std::size_t i = 0; i < f.rooms.size(); ++i) {
      const Room& room = f.rooms[i];
      const std::string p = fp + idx(".rooms", i);
      if (!room_ids.insert(room.room_id).second) r.error("SCHEMA", p, "duplicate room_id " + room.room_id);
      if (room.floor_index != f.index) r.error("SCHEMA", p + ".floor_index", "room on wrong floor");
      if (!is_rectilinear(room.polygon) || !is_simple(room.polygon) || signed_area(room.polygon) <= 0.0) {
        r.error("ROOM_GEOMETRY", p + ".polygon", "polygon must be simple, rectilinear and counter-clockwise");
        continue;
      }
      for (Vec2 v : room.polygon) {
        if (!on_grid(v.x, res) || !on_grid(v.y, res)) {
          r.error("ROOM_GEOMETRY", p + ".polygon", "vertex off the grid");
          break;
        }
      }
      if (!is_rectilinear(room.interior) || !is_simple(room.interior) ||
          polygon_area(room.interior) >= polygon_area(room.polygon)) {
        r.error("ROOM_GEOMETRY", p + ".interior", "interior must be a simple rectilinear polygon inside the outline");
      }
      const RoomScore s = score_polygon(room.polygon);
      if (!passes_thresholds(s, polygon_area(room.polygon), room.room_type, plan.spec.thresholds)) {
        r.error("ROOM_THRESHOLD", p, "room " + room.room_id + " misses aspect/fill/area thresholds");
      }
      auto m = plan.metrics.find(room.room_id);
      if (m == plan.metrics.end() || std::abs(m->second.aspect_ratio - s.aspect_ratio) > 1e-9 ||
          std::abs(m->second.fill_ratio - s.fill_ratio) > 1e-9) {
        r.error("ROOM_THRESHOLD", "floorplan.metrics." + room.room_id, "metrics disagree with polygon");
      }
    }
    for (std::size_t i = 0; i < f.rooms.size(); ++i) {
      for (std::size_t j = i + 1; j < f.rooms.size(); ++j) {
        if (overlap_area(f.rooms[i].polygon, f.rooms[j].polygon) > 1e-9) {
          r.error("ROOM_OVERLAP", fp + idx(".rooms", j),
                  f.rooms[i].room_id + " overlaps " + f.rooms[j].room_id);
        }
      }
    }
    for (std::size_t i = 0; i < f.walls.size(); ++i) {
      const WallSegment& w = f.walls[i];
      const std::string p = fp + idx(".walls", i);
      if (!(w.thickness > 0.0)) r.error("WALL", p + ".thickness", "thickness must be positive");
      if ((w.a.x != w.b.x && w.a.y != w.b.y) || w.a == w.b) {
        r.error("WALL", p + ".endpoints", "wall must be a horizontal or vertical segment");
      }
      if (!room_ids.count(w.room_a)) r.error("DANGLING_REF", p + ".rooms", "unknown room " + w.room_a);
      if (w.kind == WallKind::kInterior) {
        if (!room_ids.count(w.room_b) || w.room_b == w.room_a) {
          r.error("WALL", p + ".rooms", "interior wall must be shared by two rooms");
        }
      } else if (w.room_b != kExterior) {
        r.error("WALL", p + ".rooms", "exterior wall must face EXTERIOR");
      }
    }
    for (std::size_t i = 0; i < f.openings.size(); ++i) {
      const Opening& o = f.openings[i];
      const std::string p = fp + idx(".openings", i);
      const WallSegment* w = plan.find_wall(o.wall_id);
      if (!w) {
        r.error("DANGLING_REF", p + ".wall_ref", "unknown wall " + o.wall_id);
        continue;
      }
      if (!(o.width < w->length())) r.error("OPENING", p + ".width", "opening wider than its wall");
      if (o.room_a != w->room_a || o.room_b != w->room_b || o.room_a == o.room_b) {
        r.error("OPENING", p + ".connects", "opening must connect the two sides of its wall");
      }
      if ((o.kind == OpeningKind::kExteriorDoor) != (o.room_b == kExterior)) {
        r.error("OPENING", p + ".kind", "exterior doors and only they face EXTERIOR");
      }
      const Vec2 d = w->b - w->a;
      const double t = dot(o.center - w->a, d) / dot(d, d);
      const Vec2 foot = w->a + d * t;
      if (length(foot - o.center) > 1e-6 || t * w->length() < o.width * 0.5 - 1e-9 ||
          (1.0 - t) * w->length() < o.width * 0.5 - 1e-9) {
        r.error("OPENING", p + ".center", "opening does not lie within its wall");
      }
    }
  }
  for (std::size_t i = 0; i < plan.staircases.size(); ++i) {
    const Staircase& s = plan.staircases[i];
    const std::string p = idx("floorplan.staircases", i);
    if (s.upper_floor != s.lower_floor + 1) r.error("STAIRCASE", p, "floors must be consecutive");
    const Room* lo = plan.find_room(s.lower_room);
    const Room* up = plan.find_room(s.upper_room);
    if (!lo || !up) {
      r.error("DANGLING_REF", p, "staircase names an unknown room");
      continue;
    }
    const OrientedRect box = OrientedRect::from_aabb(s.footprint);
    if (lo->floor_index != s.lower_floor || up->floor_index != s.upper_floor ||
        !contained_in(box, decompose_rectilinear(lo->interior), 1e-6) ||
        !contained_in(box, decompose_rectilinear(up->interior), 1e-6)) {
      r.error("STAIRCASE", p + ".footprint", "footprint must lie inside a room on both floors");
    }
    bool cut = false;
    for (const auto& f : plan.floors) {
      if (f.index != s.lower_floor) continue;
      for (const Rect2& c : f.ceiling_cutouts) cut = cut || c == s.footprint;
    }
    if (!cut) r.error("STAIRCASE", p, "no matching ceiling cutout");
  }
  if (plan.floors.size() > 1) {
    for (int f = 0; f + 1 < static_cast<int>(plan.floors.size()); ++f) {
      const bool any = std::any_of(plan.staircases.begin(), plan.staircases.end(),
                                   [&](const Staircase& s) { return s.lower_floor == f; });
      if (!any) r.error("STAIRCASE", "floorplan.staircases", "floors " + std::to_string(f) + " and " + std::to_string(f + 1) + " are not linked");
    }
  }
  if (!check_connectivity(plan)) r.error("CONNECTIVITY", "floorplan", "room graph is disconnected");
}

inline void check_placement(const SceneDocument& doc, ValidationReport& r) {
  const SceneGraph& scene = doc.scene;
  const Catalog& cat = doc.catalog_subset;
  r.merge(check_collision_free(scene));
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < scene.placed.size(); ++i) {
    if (!order.emplace(scene.placed[i].instance_id, i).second) {
      r.error("SCHEMA", idx("scene.placed", i), "duplicate instance_id");
    }
  }
  for (std::size_t i = 0; i < scene.placed.size(); ++i) {
    const PlacedAsset& p = scene.placed[i];
    const std::string path = idx("scene.placed", i);
    const AssetRecord* a = cat.find(p.asset_id);
    if (!a) {
      r.error("DANGLING_REF", path + ".asset_id", "unknown asset " + p.asset_id);
      continue;
    }
    if (!(p.size == a->bounds)) r.error("SCHEMA", path + ".size", "size differs from catalog bounds");
    if (!(p.pose.yaw >= 0.0 && p.pose.yaw < kTwoPi)) r.error("SCHEMA", path + ".pose.yaw", "yaw outside [0, 2pi)");
    const Room* room = scene.plan.find_room(p.room_id);
    if (!room) continue;  // reported as CONTAINMENT
    if (room->floor_index != p.floor_index) r.error("SUPPORT", path + ".floor_index", "floor differs from room");
    const Compatibility compat = compatibility(*a);
    if (p.support_kind == SupportKind::kFloor || p.support_kind == SupportKind::kWall) {
      if (p.parent != p.room_id) r.error("SUPPORT", path + ".parent", "floor and wall assets rest on their room");
      const double base = scene.plan.elevation(room->floor_index) +
                          (p.support_kind == SupportKind::kWall ? kWallMountHeight : 0.0);
      if (std::abs(p.pose.position.z - base) > 1e-6) r.error("SUPPORT", path + ".pose.position.z", "height differs from support");
      const bool allowed = p.support_kind == SupportKind::kFloor ? compat.floor : compat.wall;
      if (!allowed) r.error("SEMANTIC", path + ".support_kind", p.asset_id + " may not rest on " + std::string(to_string(p.support_kind)));
      if (blocks_clearance(scene, p)) r.error("CLEARANCE", path, p.instance_id + " blocks a door swing or walkway");
      continue;
    }
    auto parent = order.find(p.parent);
    if (parent == order.end()) {
      r.error("SUPPORT", path + ".parent", "unknown support parent " + p.parent);
      continue;
    }
    if (parent->second >= i) r.error("SUPPORT", path + ".parent", "support parent must be placed earlier");
    // Walk the chain to detect cycles.
    std::set<std::string> seen{p.instance_id};
    std::string cur = p.parent;
    while (order.count(cur)) {
      if (!seen.insert(cur).second) {
        r.error("SUPPORT", path + ".parent", "support cycle");
        break;
      }
      cur = scene.placed[order[cur]].parent;
    }
    const PlacedAsset& owner = scene.placed[parent->second];
    const SupportSurface* s = scene.surface_of(owner.instance_id);
    if (!s) {
      r.error("SUPPORT", path + ".parent", "parent offers no support surface");
      continue;
    }
    if (support_kind_for(s->kind) != p.support_kind) r.error("SUPPORT", path + ".support_kind", "support kind does not match the surface");
    if (!compat.allows(s->kind)) r.error("SEMANTIC", path, p.asset_id + " may not rest on a " + std::string(to_string(s->kind)));
    if (std::abs(p.pose.position.z - (owner.pose.position.z + s->height)) > 1e-6) {
      r.error("SUPPORT", path + ".pose.position.z", "height differs from support surface");
    }
    if (!rect_within(p.footprint(), surface_world_rect(owner, *s), kContainmentTolerance)) {
      r.error("SUPPORT", path + ".pose", "footprint leaves the support surface");
    }
    if (s->max_item_height && p.size.z > *s->max_item_height + 1e-9) {
      r.error("SUPPORT", path + ".size", "asset taller than the surface clearance");
    }
    if (p.room_id != owner.room_id) r.error("SUPPORT", path + ".room_id", "room differs from support parent");
  }
  for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
    const SupportSurface& s = scene.surfaces[i];
    const std::string path = idx("scene.surfaces", i);
    const PlacedAsset* owner = scene.find(s.owner);
    if (!owner) {
      r.error("DANGLING_REF", path + ".owner", "unknown owner " + s.owner);
      continue;
    }
    const Rect2 e = s.extent();
    if (!(polygon_area(s.polygon) > 0.0) || e.min.x < -owner->size.x * 0.5 - 1e-9 ||
        e.max.x > owner->size.x * 0.5 + 1e-9 || e.min.y < -owner->size.y * 0.5 - 1e-9 ||
        e.max.y > owner->size.y * 0.5 + 1e-9 || s.height < 0.0 || s.height > owner->size.z + 1e-9) {
      r.error("SUPPORT", path, "surface must lie within its owner's bounds");
    }
  }
  // excludes rules never share a room.
  for (const auto& rule : cat.rules()) {
    if (rule.relation != Relation::kExcludes) continue;
    std::set<std::string> subject_rooms;
    for (const auto& p : scene.placed) {
      const AssetRecord* a = cat.find(p.asset_id);
      if (a && reference_matches(*a, rule.subject)) subject_rooms.insert(p.room_id);
    }
    for (const auto& p : scene.placed) {
      const AssetRecord* a = cat.find(p.asset_id);
      if (a && reference_matches(*a, rule.object) && subject_rooms.count(p.room_id)) {
        r.error("SEMANTIC", "scene.placed", "'" + rule.subject + "' and '" + rule.object + "' share room " + p.room_id);
        break;
      }
    }
  }
}

inline void check_dressing(const SceneDocument& doc, ValidationReport& r) {
  const Catalog& cat = doc.catalog_subset;
  std::vector<MaterialTarget> targets;
  try {
    targets = material_targets(doc.scene, cat);
  } catch (const Error&) {
    return;  // unknown assets already reported
  }
  std::map<std::string, std::string> cls;
  for (const auto& t : targets) cls[t.target] = t.target_class;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.materials.size(); ++i) {
    const auto& m = doc.materials[i];
    const std::string path = idx("materials", i);
    auto it = cls.find(m.target);
    if (it == cls.end()) {
      r.error("DANGLING_REF", path + ".target", "unknown target " + m.target);
      continue;
    }
    if (!seen.insert(m.target).second) r.error("MATERIAL", path, "target assigned twice: " + m.target);
    const MaterialRecord* rec = cat.find_material(m.material_id);
    if (!rec) {
      r.error("DANGLING_REF", path + ".material_id", "unknown material " + m.material_id);
    } else if (!rec->applicable_to.count(it->second)) {
      r.error("MATERIAL", path + ".material_id", m.material_id + " is not applicable to " + it->second);
    }
  }
  for (const auto& [target, c] : cls) {
    if (!seen.count(target)) r.error("MATERIAL", "materials", "no material for " + target);
  }
  std::set<std::string> rooms_lit;
  for (std::size_t i = 0; i < doc.lights.size(); ++i) {
    const LightSpec& l = doc.lights[i];
    const std::string path = idx("lights", i);
    char range[64];
    if (!(l.intensity >= kMinIntensity && l.intensity <= kMaxIntensity)) {
      std::snprintf(range, sizeof range, "[%g,%g]", kMinIntensity, kMaxIntensity);
      r.error("LIGHT", path + ".intensity", path + ".intensity out of " + range);
    }
    if (!(l.color_temperature >= kMinColorTemperature && l.color_temperature <= kMaxColorTemperature)) {
      std::snprintf(range, sizeof range, "[%g,%g]", kMinColorTemperature, kMaxColorTemperature);
      r.error("LIGHT", path + ".color_temperature", path + ".color_temperature out of " + range);
    }
    if (!(l.exposure >= kMinExposure && l.exposure <= kMaxExposure)) {
      std::snprintf(range, sizeof range, "[%g,%g]", kMinExposure, kMaxExposure);
      r.error("LIGHT", path + ".exposure", path + ".exposure out of " + range);
    }
    const Room* room = doc.scene.plan.find_room(l.room_id);
    if (!room) {
      r.error("DANGLING_REF", path + ".room_id", "unknown room " + l.room_id);
      continue;
    }
    if (!point_in_polygon(room->interior, {l.position.x, l.position.y})) {
      r.error("LIGHT", path + ".position", "light lies outside its room");
    }
    if (l.kind == LightKind::kCeiling) rooms_lit.insert(l.room_id);
  }
  for (const Room* room : doc.scene.plan.all_rooms()) {
    if (!rooms_lit.count(room->room_id)) r.error("LIGHT", "lights", "room " + room->room_id + " has no ceiling light");
  }
}

inline void check_physics(const SceneDocument& doc, ValidationReport& r) {
  const Catalog& cat = doc.catalog_subset;
  std::set<std::string> architecture;
  for (const auto& f : doc.scene.plan.floors) {
    for (const auto& w : f.walls) architecture.insert(w.wall_id);
    for (const auto& room : f.rooms) architecture.insert("floor:" + room.room_id);
  }
  std::set<std::string> annotated;
  for (std::size_t i = 0; i < doc.physics.size(); ++i) {
    const PhysicsAnnotation& a = doc.physics[i];
    const std::string path = idx("physics", i);
    if (!annotated.insert(a.instance_id).second) r.error("PHYSICS", path, "duplicate annotation for " + a.instance_id);
    if (!(a.dynamic_friction <= a.static_friction)) r.error("PHYSICS", path + ".dynamic_friction", "dynamic friction exceeds static friction");
    if (!(a.restitution >= 0.0 && a.restitution <= 1.0)) r.error("PHYSICS", path + ".restitution", "restitution outside [0,1]");
    if (!(a.mass > 0.0)) r.error("PHYSICS", path + ".mass", "mass must be positive");
    if (architecture.count(a.instance_id)) {
      if (a.dynamic || a.collider.kind != ColliderKind::kBox) r.error("PHYSICS", path, "architecture must be static boxes");
      if (!friction_range(MaterialClass::kStone).contains(a.static_friction)) {
        r.error("PHYSICS", path + ".static_friction", "architecture friction outside the stone range");
      }
      continue;
    }
    const PlacedAsset* p = doc.scene.find(a.instance_id);
    if (!p) {
      r.error("DANGLING_REF", path + ".instance_id", "unknown instance " + a.instance_id);
      continue;
    }
    const AssetRecord* rec = cat.find(p->asset_id);
    if (!rec) continue;
    const FrictionRange range = friction_range(rec->material_class);
    if (!range.contains(a.static_friction)) {
      r.error("PHYSICS", path + ".static_friction",
              "friction " + std::to_string(a.static_friction) + " outside the " +
                  std::string(to_string(rec->material_class)) + " range");
    }
    if (rec->articulation && a.collider.kind == ColliderKind::kConvexHull) {
      r.error("PHYSICS", path + ".collider", "articulated assets need separable parts");
    }
  }
  for (const auto& id : architecture) {
    if (!annotated.count(id)) r.error("PHYSICS", "physics", "no annotation for " + id);
  }
  for (const auto& p : doc.scene.placed) {
    if (!annotated.count(p.instance_id)) r.error("PHYSICS", "physics", "no annotation for " + p.instance_id);
  }
  std::map<std::string, std::vector<const JointSpec*>> by_instance;
  for (std::size_t i = 0; i < doc.joints.size(); ++i) {
    const JointSpec& j = doc.joints[i];
    const std::string path = idx("joints", i);
    by_instance[j.instance_id].push_back(&j);
    const PlacedAsset* p = doc.scene.find(j.instance_id);
    const AssetRecord* rec = p ? cat.find(p->asset_id) : nullptr;
    if (!p || !rec) {
      r.error("DANGLING_REF", path + ".instance_id", "unknown instance " + j.instance_id);
      continue;
    }
    const ArticulationPart* part = nullptr;
    if (rec->articulation) {
      for (const auto& q : rec->articulation->parts) {
        if (q.part_id == j.part_id) part = &q;
      }
    }
    if (!part) {
      r.error("JOINT", path + ".part_id", "asset has no part " + j.part_id);
      continue;
    }
    const JointType want = part->joint == JointKindHint::kDoorLike ? JointType::kRevolute : JointType::kPrismatic;
    if (j.joint_type != want) {
      r.error("JOINT", path + ".joint_type",
              std::string(to_string(part->joint)) + " part needs a " + std::string(to_string(want)) + " joint");
    }
    if (!(j.lower < j.upper)) r.error("JOINT", path + ".limits", "lower limit must be below upper");
    const double norm = std::sqrt(j.axis.x * j.axis.x + j.axis.y * j.axis.y + j.axis.z * j.axis.z);
    if (std::abs(norm - 1.0) > 1e-9) r.error("JOINT", path + ".axis", "axis must be unit length");
    if (j.joint_type == JointType::kRevolute && j.upper > kPi + 1e-12) r.error("JOINT", path + ".limits", "revolute travel exceeds pi");
    if (j.joint_type == JointType::kPrismatic) {
      const double bound = std::abs(j.axis.x) * rec->bounds.x + std::abs(j.axis.y) * rec->bounds.y +
                           std::abs(j.axis.z) * rec->bounds.z;
      if (j.upper > bound + 1e-9) r.error("JOINT", path + ".limits", "prismatic travel exceeds the owner bounds");
      if (part->joint == JointKindHint::kButtonLike && j.upper > kButtonTravelLimit + 1e-12) {
        r.error("JOINT", path + ".limits", "button travel exceeds 5 mm");
      }
    }
    if (j.stiffness < 0.0 || j.damping < 0.0) r.error("JOINT", path + ".drive", "drive gains must be non-negative");
  }
  for (const auto& p : doc.scene.placed) {
    const AssetRecord* rec = cat.find(p.asset_id);
    const std::size_t want = rec && rec->articulation ? rec->articulation->parts.size() : 0;
    auto it = by_instance.find(p.instance_id);
    const std::size_t have = it == by_instance.end() ? 0 : it->second.size();
    if (have != want) {
      r.error("JOINT", "joints", p.instance_id + " has " + std::to_string(have) + " joints, expected " + std::to_string(want));
    }
  }
}

}  // namespace validate_detail

inline ValidationReport validate_document(const SceneDocument& doc) {
  ValidationReport r;
  if (compute_content_hash(doc) != doc.content_hash) {
    r.error("HASH", "content_hash", "content_hash does not match the document");
  }
  validate_detail::check_layout(doc.scene.plan, r);
  validate_detail::check_placement(doc, r);
  validate_detail::check_dressing(doc, r);
  validate_detail::check_physics(doc, r);
  return r;
}

inline ValidationReport validate_scene(std::string_view bytes) {
  ValidationReport r;
  Json j;
  try {
    j = parse_json_text(bytes, "scene");
  } catch (const ParseError& e) {
    r.error("PARSE", "", e.what());
    return r;
  }
  SceneDocument doc;
  try {
    doc = scene_from_json(j);
  } catch (const Error& e) {
    r.error("SCHEMA", "", e.what());
    return r;
  }
  return validate_document(doc);
}

// ---------------------------------------------------------------------------
// SVG preview

inline constexpr double kSvgScale = 20.0;  // pixels per meter

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace svg_detail

inline std::string render_floorplan_svg(const SceneDocument& doc, int floor_index) {
  using svg_detail::escape;
  using svg_detail::num;
  const FloorPlan& plan = doc.scene.plan;
  const FloorLevel* level = nullptr;
  for (const auto& f : plan.floors) {
    if (f.index == floor_index) level = &f;
  }
  if (!level) {
    throw FloorOutOfRange("floor " + std::to_string(floor_index) + " not in [0, " +
                          std::to_string(plan.floors.size()) + ")");
  }
  const double margin = 1.0;
  const double w = (plan.spec.width + 2 * margin) * kSvgScale;
  const double h = (plan.spec.depth + 2 * margin) * kSvgScale;
  auto px = [&](Vec2 p) {
    return Vec2{(p.x + margin) * kSvgScale, (plan.spec.depth - p.y + margin) * kSvgScale};
  };
  auto points = [&](const auto& pts) {
    std::string s;
    for (Vec2 p : pts) {
      const Vec2 q = px(p);
      if (!s.empty()) s += ' ';
      s += num(q.x) + "," + num(q.y);
    }
    return s;
  };
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(w) << "\" height=\""
    << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n"
    << "<title>" << escape(doc.generation.scene_key) << " floor " << floor_index << "</title>\n"
    << "<g id=\"rooms\">\n";
  for (const auto& room : level->rooms) {
    const Vec2 c = px(polygon_centroid(room.polygon));
    o << "<polygon class=\"room\" id=\"" << escape(room.room_id) << "\" data-type=\""
      << to_string(room.room_type) << "\" points=\"" << points(room.interior)
      << "\" fill=\"#f4efe6\" stroke=\"none\"/>\n"
      << "<text class=\"room-label\" x=\"" << num(c.x) << "\" y=\"" << num(c.y)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << to_string(room.room_type) << "</text>\n";
  }
  o << "</g>\n<g id=\"walls\">\n";
  for (const auto& wall : level->walls) {
    const Vec2 a = px(wall.a);
    const Vec2 b = px(wall.b);
    o << "<line class=\"wall\" id=\"" << escape(wall.wall_id) << "\" x1=\"" << num(a.x) << "\" y1=\""
      << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y) << "\" stroke=\"#333333\" stroke-width=\""
      << num(wall.thickness * kSvgScale) << "\"/>\n";
  }
  o << "</g>\n<g id=\"openings\">\n";
  for (const auto& op : level->openings) {
    const WallSegment* wall = plan.find_wall(op.wall_id);
    if (!wall) continue;
    const Vec2 d = (wall->b - wall->a) * (0.5 * op.width / wall->length());
    const Vec2 a = px(op.center - d);
    const Vec2 b = px(op.center + d);
    o << "<line class=\"opening\" id=\"" << escape(op.opening_id) << "\" data-kind=\"" << to_string(op.kind)
      << "\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\""
      << num(b.y) << "\" stroke=\"#ffffff\" stroke-width=\"" << num(wall->thickness * kSvgScale + 2.0)
      << "\"/>\n";
  }
  o << "</g>\n<g id=\"staircases\">\n";
  for (const auto& s : plan.staircases) {
    if (s.lower_floor != floor_index && s.upper_floor != floor_index) continue;
    const Vec2 a = px({s.footprint.min.x, s.footprint.max.y});
    o << "<rect class=\"staircase\" id=\"" << escape(s.staircase_id) << "\" x=\"" << num(a.x) << "\" y=\""
      << num(a.y) << "\" width=\"" << num(s.footprint.width() * kSvgScale) << "\" height=\""
      << num(s.footprint.height() * kSvgScale) << "\" fill=\"#c8d7e6\" stroke=\"#4a6a8a\"/>\n";
  }
  o << "</g>\n<g id=\"assets\">\n";
  for (const auto& p : doc.scene.placed) {
    if (p.floor_index != floor_index) continue;
    const auto c = p.footprint().corners();
    o << "<polygon class=\"asset\" id=\"" << escape(p.instance_id) << "\" data-asset=\"" << escape(p.asset_id)
      << "\" points=\"" << points(c) << "\" fill=\"#d9a066\" fill-opacity=\"0.6\" stroke=\"#7a4a1e\"/>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Statistics

struct SceneStats {
  std::size_t room_count = 0;
  std::size_t asset_count = 0;
  std::size_t joint_count = 0;
  std::size_t light_count = 0;
  std::map<std::string, double> room_areas;
  std::map<MaterialClass, double> friction_means;
  std::map<MaterialClass, std::size_t> friction_counts;
};

inline SceneStats scene_stats(const SceneDocument& doc) {
  SceneStats s;
  for (const Room* r : doc.scene.plan.all_rooms()) {
    ++s.room_count;
    s.room_areas[r->room_id] = polygon_area(r->polygon);
  }
  s.asset_count = doc.scene.placed.size();
  s.joint_count = doc.joints.size();
  s.light_count = doc.lights.size();
  std::map<MaterialClass, double> sums;
  for (const auto& a : doc.physics) {
    const PlacedAsset* p = doc.scene.find(a.instance_id);
    const AssetRecord* rec = p ? doc.catalog_subset.find(p->asset_id) : nullptr;
    if (!rec) continue;
    sums[rec->material_class] += a.static_friction;
    ++s.friction_counts[rec->material_class];
  }
  for (const auto& [mc, total] : sums) s.friction_means[mc] = total / s.friction_counts[mc];
  return s;
}

inline Json to_json(const SceneStats& s) {
  Json areas = Json::object();
  for (const auto& [id, a] : s.room_areas) areas[id] = a;
  Json friction = Json::object();
  for (const auto& [mc, m] : s.friction_means) {
    friction[std::string(to_string(mc))] = {{"mean", m}, {"count", s.friction_counts.at(mc)}};
  }
  return {{"room_count", s.room_count},   {"asset_count", s.asset_count},
          {"joint_count", s.joint_count}, {"light_count", s.light_count},
          {"room_areas", areas},          {"friction", friction}};
}

}  // namespace scenesmith
