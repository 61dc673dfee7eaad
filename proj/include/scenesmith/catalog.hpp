#pragma once

// Annotated asset and material libraries: loading, invariant checks,
// indexing, linting and filtered queries.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scenesmith/enums.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/geometry.hpp"
#include "scenesmith/json_util.hpp"

namespace scenesmith {

inline constexpr std::string_view kCatalogSchema = "agentworld-catalog/1";

struct ArticulationPart {
  std::string part_id;
  JointKindHint joint = JointKindHint::kDoorLike;
  double travel_hint = 0.0;  // degrees for door_like, meters otherwise

  bool operator==(const ArticulationPart&) const = default;
};

struct ArticulationTemplate {
  std::vector<ArticulationPart> parts;

  bool operator==(const ArticulationTemplate&) const = default;
  const ArticulationPart* first_of(JointKindHint kind) const {
    for (const auto& p : parts) {
      if (p.joint == kind) return &p;
    }
    return nullptr;
  }
};

struct AssetRecord {
  std::string asset_id;
  std::string display_name;
  Category category = Category::kBasic;
  Subtype subtype = Subtype::kOther;
  std::string object_class;
  std::set<RoomType> room_affinity;
  Vec3 bounds;
  MaterialClass material_class = MaterialClass::kWood;
  std::set<PlacementTag> placement_tags;
  std::optional<double> mass_hint;
  std::optional<ArticulationTemplate> articulation;
  std::string mesh_ref;
  bool high_fidelity = false;

  bool operator==(const AssetRecord&) const = default;
  bool has_tag(PlacementTag t) const { return placement_tags.count(t) > 0; }
  bool fits_room(RoomType r) const {
    return room_affinity.count(r) > 0 || room_affinity.count(RoomType::kAny) > 0;
  }
  bool has_joint(JointKindHint kind) const {
    return articulation && articulation->first_of(kind) != nullptr;
  }
};

struct PbrParams {
  std::array<double, 3> base_color{};
  double roughness = 0.5;
  double metallic = 0.0;

  bool operator==(const PbrParams&) const = default;
};

struct MaterialRecord {
  std::string material_id;
  MaterialFamily family = MaterialFamily::kPaint;
  // "wall", "floor", "ceiling" or "asset:<material_class>".
  std::set<std::string> applicable_to;
  PbrParams pbr_params;

  bool operator==(const MaterialRecord&) const = default;
};

struct CoOccurrenceRule {
  std::string subject;  // asset_id, subtype name or object_class
  Relation relation = Relation::kRequires;
  std::string object;
  std::optional<double> weight;

  bool operator==(const CoOccurrenceRule&) const = default;
};

// Object classes that must be represented per room type; shared by the
// linter's coverage scan and the basic-asset placement stage.
inline std::vector<std::string> mandatory_classes(RoomType room) {
  switch (room) {
    case RoomType::kLivingRoom:
      return {"sofa", "tv"};
    case RoomType::kBedroom:
      return {"bed", "chair"};
    case RoomType::kKitchen:
      return {"table"};
    case RoomType::kAny:
      break;
  }
  return {};
}

// Object classes whose real-world counterparts have movable parts.
inline bool is_articulated_class(std::string_view object_class) {
  static constexpr std::array<std::string_view, 7> kClasses = {
      "fridge", "microwave", "stove", "closet", "dresser", "cabinet", "alarm_clock"};
  return std::find(kClasses.begin(), kClasses.end(), object_class) != kClasses.end();
}

inline std::string asset_target_class(MaterialClass mc) {
  return "asset:" + std::string(to_string(mc));
}

inline bool valid_applicability(std::string_view a) {
  if (a == "wall" || a == "floor" || a == "ceiling") return true;
  if (a.substr(0, 6) == "asset:") return parse_enum<MaterialClass>(a.substr(6)).has_value();
  return false;
}

// A rule reference names an asset id, a subtype or an object class.
inline bool reference_matches(const AssetRecord& a, std::string_view ref) {
  return a.asset_id == ref || to_string(a.subtype) == ref || a.object_class == ref;
}

struct AssetFilter {
  std::optional<Category> category;
  std::optional<Subtype> subtype;
  std::optional<RoomType> room;
  std::optional<PlacementTag> tag;

  bool matches(const AssetRecord& a) const {
    if (category && a.category != *category) return false;
    if (subtype && a.subtype != *subtype) return false;
    if (room && !a.fits_room(*room)) return false;
    if (tag && !a.has_tag(*tag)) return false;
    return true;
  }
};

namespace catalog_detail {

inline void check_asset(const AssetRecord& a, const std::string& ctx) {
  if (a.asset_id.empty()) throw InvariantViolation(ctx + ": asset_id must be non-empty");
  if (!(a.bounds.x > 0.0 && a.bounds.y > 0.0 && a.bounds.z > 0.0)) {
    throw InvariantViolation(ctx + ": bounds must be strictly positive in x, y and z");
  }
  if (a.category == Category::kBasic && !a.has_tag(PlacementTag::kOnFloor) &&
      !a.has_tag(PlacementTag::kWallMounted)) {
    throw InvariantViolation(ctx +
                             ": placement_tags of a basic asset must contain on_floor or "
                             "wall_mounted");
  }
  if (a.articulation) {
    if (a.category != Category::kInteractable) {
      throw InvariantViolation(ctx + ": articulation is only allowed on interactable assets");
    }
    if (a.articulation->parts.empty()) {
      throw InvariantViolation(ctx + ": articulation parts must be non-empty");
    }
    std::set<std::string> ids;
    for (const auto& p : a.articulation->parts) {
      if (!(p.travel_hint > 0.0)) {
        throw InvariantViolation(ctx + ": articulation travel_hint must be > 0 (part '" +
                                 p.part_id + "')");
      }
      if (!ids.insert(p.part_id).second) {
        throw InvariantViolation(ctx + ": articulation part_id '" + p.part_id +
                                 "' is duplicated");
      }
    }
  }
  if (a.mass_hint && !(*a.mass_hint > 0.0)) {
    throw InvariantViolation(ctx + ": mass_hint must be > 0");
  }
  if (a.room_affinity.empty()) {
    throw InvariantViolation(ctx + ": room_affinity must be non-empty");
  }
}

inline void check_material(const MaterialRecord& m, const std::string& ctx) {
  if (m.material_id.empty()) throw InvariantViolation(ctx + ": material_id must be non-empty");
  if (m.applicable_to.empty()) throw InvariantViolation(ctx + ": applicable_to must be non-empty");
  for (const auto& a : m.applicable_to) {
    if (!valid_applicability(a)) {
      throw InvariantViolation(ctx + ": applicable_to entry '" + a + "' is not recognised");
    }
  }
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (double c : m.pbr_params.base_color) {
    if (!unit(c)) throw InvariantViolation(ctx + ": pbr_params.base_color outside [0,1]");
  }
  if (!unit(m.pbr_params.roughness)) {
    throw InvariantViolation(ctx + ": pbr_params.roughness outside [0,1]");
  }
  if (!unit(m.pbr_params.metallic)) {
    throw InvariantViolation(ctx + ": pbr_params.metallic outside [0,1]");
  }
}

inline void check_rule(const CoOccurrenceRule& r, const std::string& ctx) {
  if (r.relation == Relation::kExcludes && r.subject == r.object) {
    throw InvariantViolation(ctx + ": excludes rule subject must differ from object");
  }
  if ((r.relation == Relation::kPrefersNear) != r.weight.has_value()) {
    throw InvariantViolation(ctx + ": weight must be present iff relation is prefers_near");
  }
  if (r.weight && !(*r.weight >= 0.0)) throw InvariantViolation(ctx + ": weight must be >= 0");
}

}  // namespace catalog_detail

// Immutable, indexed asset/material library. Records are kept sorted by id.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<AssetRecord> assets, std::vector<MaterialRecord> materials,
          std::vector<CoOccurrenceRule> rules)
      : assets_(std::move(assets)), materials_(std::move(materials)), rules_(std::move(rules)) {
    std::sort(assets_.begin(), assets_.end(),
              [](const auto& a, const auto& b) { return a.asset_id < b.asset_id; });
    std::sort(materials_.begin(), materials_.end(),
              [](const auto& a, const auto& b) { return a.material_id < b.material_id; });
    for (std::size_t i = 0; i < assets_.size(); ++i) {
      const auto& a = assets_[i];
      catalog_detail::check_asset(a, "asset '" + a.asset_id + "'");
      if (i > 0 && assets_[i - 1].asset_id == a.asset_id) {
        throw InvariantViolation("asset '" + a.asset_id + "': asset_id is not unique");
      }
      by_category_[a.category].push_back(i);
      by_subtype_[a.subtype].push_back(i);
      for (RoomType r : a.room_affinity) by_room_[r].push_back(i);
      for (PlacementTag t : a.placement_tags) by_tag_[t].push_back(i);
    }
    for (std::size_t i = 0; i < materials_.size(); ++i) {
      catalog_detail::check_material(materials_[i],
                                     "material '" + materials_[i].material_id + "'");
      if (i > 0 && materials_[i - 1].material_id == materials_[i].material_id) {
        throw InvariantViolation("material '" + materials_[i].material_id +
                                 "': material_id is not unique");
      }
    }
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      catalog_detail::check_rule(rules_[i], "co_occurrence[" + std::to_string(i) + "]");
    }
  }

  bool operator==(const Catalog& o) const {
    return assets_ == o.assets_ && materials_ == o.materials_ && rules_ == o.rules_;
  }

  const std::vector<AssetRecord>& assets() const { return assets_; }
  const std::vector<MaterialRecord>& materials() const { return materials_; }
  const std::vector<CoOccurrenceRule>& rules() const { return rules_; }

  const AssetRecord* find(std::string_view id) const {
    auto it = std::lower_bound(assets_.begin(), assets_.end(), id,
                               [](const AssetRecord& a, std::string_view k) { return a.asset_id < k; });
    return it != assets_.end() && it->asset_id == id ? &*it : nullptr;
  }

  const MaterialRecord* find_material(std::string_view id) const {
    auto it = std::lower_bound(
        materials_.begin(), materials_.end(), id,
        [](const MaterialRecord& m, std::string_view k) { return m.material_id < k; });
    return it != materials_.end() && it->material_id == id ? &*it : nullptr;
  }

  // Index-driven lookup: intersects the narrowest applicable index, then
  // applies the full predicate. Results are in asset_id order.
  std::vector<AssetRecord> query(const AssetFilter& filter) const {
    const std::vector<std::size_t>* narrowest = nullptr;
    std::vector<std::size_t> room_ids;
    auto consider = [&](const std::vector<std::size_t>* list) {
      if (!narrowest || list->size() < narrowest->size()) narrowest = list;
    };
    static const std::vector<std::size_t> kEmpty;
    if (filter.category) consider(lookup(by_category_, *filter.category, kEmpty));
    if (filter.subtype) consider(lookup(by_subtype_, *filter.subtype, kEmpty));
    if (filter.tag) consider(lookup(by_tag_, *filter.tag, kEmpty));
    if (filter.room) {
      const auto* direct = lookup(by_room_, *filter.room, kEmpty);
      const auto* any = lookup(by_room_, RoomType::kAny, kEmpty);
      std::set_union(direct->begin(), direct->end(), any->begin(), any->end(),
                     std::back_inserter(room_ids));
      consider(&room_ids);
    }
    std::vector<AssetRecord> out;
    if (!narrowest) return assets_;
    for (std::size_t i : *narrowest) {
      if (filter.matches(assets_[i])) out.push_back(assets_[i]);
    }
    return out;
  }

  // Assets referenced by a co-occurrence rule term.
  bool reference_exists(std::string_view ref) const {
    return std::any_of(assets_.begin(), assets_.end(),
                       [&](const AssetRecord& a) { return reference_matches(a, ref); });
  }

 private:
  template <typename K>
  static const std::vector<std::size_t>* lookup(const std::map<K, std::vector<std::size_t>>& m,
                                                K key, const std::vector<std::size_t>& empty) {
    auto it = m.find(key);
    return it == m.end() ? &empty : &it->second;
  }

  std::vector<AssetRecord> assets_;
  std::vector<MaterialRecord> materials_;
  std::vector<CoOccurrenceRule> rules_;
  std::map<Category, std::vector<std::size_t>> by_category_;
  std::map<Subtype, std::vector<std::size_t>> by_subtype_;
  std::map<RoomType, std::vector<std::size_t>> by_room_;
  std::map<PlacementTag, std::vector<std::size_t>> by_tag_;
};

inline std::vector<AssetRecord> query_assets(const Catalog& catalog, const AssetFilter& filter) {
  return catalog.query(filter);
}

// ---------------------------------------------------------------------------
// JSON mapping

inline Json to_json(const AssetRecord& a) {
  Json j;
  j["asset_id"] = a.asset_id;
  j["display_name"] = a.display_name;
  j["category"] = to_string(a.category);
  j["subtype"] = to_string(a.subtype);
  j["object_class"] = a.object_class;
  j["room_affinity"] = Json::array();
  for (RoomType r : a.room_affinity) j["room_affinity"].push_back(to_string(r));
  j["bounds"] = {{"x", a.bounds.x}, {"y", a.bounds.y}, {"z", a.bounds.z}};
  j["material_class"] = to_string(a.material_class);
  j["placement_tags"] = Json::array();
  for (PlacementTag t : a.placement_tags) j["placement_tags"].push_back(to_string(t));
  if (a.mass_hint) j["mass_hint"] = *a.mass_hint;
  if (a.articulation) {
    Json parts = Json::array();
    for (const auto& p : a.articulation->parts) {
      parts.push_back(
          {{"part_id", p.part_id}, {"joint", to_string(p.joint)}, {"travel_hint", p.travel_hint}});
    }
    j["articulation"] = {{"parts", parts}};
  }
  j["mesh_ref"] = a.mesh_ref;
  if (a.high_fidelity) j["high_fidelity"] = true;
  return j;
}

inline AssetRecord asset_from_json(const Json& j, const std::string& ctx) {
  AssetRecord a;
  a.asset_id = get_string(j, "asset_id", ctx);
  const std::string c = ctx + " (" + a.asset_id + ")";
  a.display_name = get_string(j, "display_name", c);
  a.category = get_enum<Category>(j, "category", c);
  a.subtype = get_enum<Subtype>(j, "subtype", c);
  a.object_class = get_string(j, "object_class", c);
  for (const Json& r : get_array(j, "room_affinity", c)) {
    a.room_affinity.insert(enum_from_json<RoomType>(r, "room_affinity", c));
  }
  const Json& b = require(j, "bounds", c);
  a.bounds = {get_number(b, "x", c + ".bounds"), get_number(b, "y", c + ".bounds"),
              get_number(b, "z", c + ".bounds")};
  const Json& mc = require(j, "material_class", c);
  if (!mc.is_string() || !parse_enum<MaterialClass>(mc.get<std::string>())) {
    throw InvariantViolation(c + ": material_class '" + (mc.is_string() ? mc.get<std::string>() : mc.dump()) +
                             "' is not a known material class");
  }
  a.material_class = *parse_enum<MaterialClass>(mc.get<std::string>());
  for (const Json& t : get_array(j, "placement_tags", c)) {
    a.placement_tags.insert(enum_from_json<PlacementTag>(t, "placement_tags", c));
  }
  if (j.contains("mass_hint") && !j["mass_hint"].is_null()) {
    a.mass_hint = as_number(j["mass_hint"], "mass_hint", c);
  }
  if (j.contains("articulation") && !j["articulation"].is_null()) {
    ArticulationTemplate t;
    for (const Json& p : get_array(j["articulation"], "parts", c + ".articulation")) {
      ArticulationPart part;
      part.part_id = get_string(p, "part_id", c + ".articulation");
      part.joint = get_enum<JointKindHint>(p, "joint", c + ".articulation");
      part.travel_hint = get_number(p, "travel_hint", c + ".articulation");
      t.parts.push_back(part);
    }
    a.articulation = t;
  }
  a.mesh_ref = get_string(j, "mesh_ref", c);
  if (j.contains("high_fidelity")) a.high_fidelity = get_bool(j, "high_fidelity", c);
  return a;
}

inline Json to_json(const MaterialRecord& m) {
  Json j;
  j["material_id"] = m.material_id;
  j["family"] = to_string(m.family);
  j["applicable_to"] = Json(m.applicable_to);
  j["pbr_params"] = {{"base_color", m.pbr_params.base_color},
                     {"roughness", m.pbr_params.roughness},
                     {"metallic", m.pbr_params.metallic}};
  return j;
}

inline MaterialRecord material_from_json(const Json& j, const std::string& ctx) {
  MaterialRecord m;
  m.material_id = get_string(j, "material_id", ctx);
  const std::string c = ctx + " (" + m.material_id + ")";
  m.family = get_enum<MaterialFamily>(j, "family", c);
  for (const Json& a : get_array(j, "applicable_to", c)) {
    if (!a.is_string()) throw ParseError(c + ": applicable_to entries must be strings");
    m.applicable_to.insert(a.get<std::string>());
  }
  const Json& p = require(j, "pbr_params", c);
  const Json& col = get_array(p, "base_color", c + ".pbr_params");
  if (col.size() != 3) throw ParseError(c + ": pbr_params.base_color must have 3 entries");
  for (std::size_t i = 0; i < 3; ++i) {
    m.pbr_params.base_color[i] = as_number(col[i], "base_color", c);
  }
  m.pbr_params.roughness = get_number(p, "roughness", c + ".pbr_params");
  m.pbr_params.metallic = get_number(p, "metallic", c + ".pbr_params");
  return m;
}

inline Json to_json(const CoOccurrenceRule& r) {
  Json j{{"subject", r.subject}, {"relation", to_string(r.relation)}, {"object", r.object}};
  if (r.weight) j["weight"] = *r.weight;
  return j;
}

inline CoOccurrenceRule rule_from_json(const Json& j, const std::string& ctx) {
  CoOccurrenceRule r;
  r.subject = get_string(j, "subject", ctx);
  r.relation = get_enum<Relation>(j, "relation", ctx);
  r.object = get_string(j, "object", ctx);
  if (j.contains("weight") && !j["weight"].is_null()) r.weight = get_number(j, "weight", ctx);
  return r;
}

inline Json to_json(const Catalog& c) {
  Json j;
  j["schema_version"] = kCatalogSchema;
  j["assets"] = Json::array();
  for (const auto& a : c.assets()) j["assets"].push_back(to_json(a));
  j["materials"] = Json::array();
  for (const auto& m : c.materials()) j["materials"].push_back(to_json(m));
  j["co_occurrence"] = Json::array();
  for (const auto& r : c.rules()) j["co_occurrence"].push_back(to_json(r));
  return j;
}

inline Catalog catalog_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("catalog: top level must be an object");
  const std::string version = get_string(j, "schema_version", "catalog");
  if (version != kCatalogSchema) {
    throw ParseError("catalog: unsupported schema_version '" + version + "'");
  }
  std::vector<AssetRecord> assets;
  const Json& arr = get_array(j, "assets", "catalog");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    assets.push_back(asset_from_json(arr[i], "assets[" + std::to_string(i) + "]"));
  }
  std::vector<MaterialRecord> materials;
  if (j.contains("materials")) {
    const Json& m = get_array(j, "materials", "catalog");
    for (std::size_t i = 0; i < m.size(); ++i) {
      materials.push_back(material_from_json(m[i], "materials[" + std::to_string(i) + "]"));
    }
  }
  std::vector<CoOccurrenceRule> rules;
  if (j.contains("co_occurrence")) {
    const Json& r = get_array(j, "co_occurrence", "catalog");
    for (std::size_t i = 0; i < r.size(); ++i) {
      rules.push_back(rule_from_json(r[i], "co_occurrence[" + std::to_string(i) + "]"));
    }
  }
  return Catalog(std::move(assets), std::move(materials), std::move(rules));
}

inline Catalog parse_catalog(std::string_view text) {
  return catalog_from_json(parse_json_text(text, "catalog"));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Catalog load_catalog(const std::string& path) { return parse_catalog(read_file(path)); }

// ---------------------------------------------------------------------------
// Lint

struct LintReport {
  std::vector<std::string> warnings;
  bool clean() const { return warnings.empty(); }
};

inline LintReport lint_catalog(const Catalog& catalog) {
  LintReport report;
  std::set<RoomType> rooms_seen;
  for (const auto& a : catalog.assets()) {
    for (RoomType r : a.room_affinity) {
      if (r != RoomType::kAny) rooms_seen.insert(r);
    }
  }
  for (RoomType room : kRoomTypes) {
    if (!rooms_seen.count(room)) continue;
    for (const std::string& cls : mandatory_classes(room)) {
      const bool covered =
          std::any_of(catalog.assets().begin(), catalog.assets().end(), [&](const AssetRecord& a) {
            return a.category == Category::kBasic && a.object_class == cls && a.fits_room(room);
          });
      if (!covered) {
        report.warnings.push_back(std::string(to_string(room)) + " lacks " + cls +
                                  "-class basic asset");
      }
    }
  }
  for (const auto& a : catalog.assets()) {
    if (a.category == Category::kInteractable && a.placement_tags.empty()) {
      report.warnings.push_back("asset '" + a.asset_id +
                                "': interactable asset lacks placement_tags");
    }
    if (is_articulated_class(a.object_class) && !a.articulation) {
      report.warnings.push_back("asset '" + a.asset_id + "': articulated class '" +
                                a.object_class + "' lacks an articulation template");
    }
  }
  for (std::size_t i = 0; i < catalog.rules().size(); ++i) {
    const auto& r = catalog.rules()[i];
    for (const std::string* ref : {&r.subject, &r.object}) {
      if (!catalog.reference_exists(*ref)) {
        report.warnings.push_back("dangling rule co_occurrence[" + std::to_string(i) +
                                  "]: unknown reference '" + *ref + "'");
      }
    }
  }
  std::set<std::string> targets = {"wall", "floor", "ceiling"};
  for (const auto& a : catalog.assets()) targets.insert(asset_target_class(a.material_class));
  for (const auto& t : targets) {
    const bool any = std::any_of(catalog.materials().begin(), catalog.materials().end(),
                                 [&](const MaterialRecord& m) { return m.applicable_to.count(t); });
    if (!any) report.warnings.push_back("no material applicable to '" + t + "'");
  }
  return report;
}

}  // namespace scenesmith
