#pragma once

// End-to-end scene generation: floorplan, furnishing, dressing and physics
// combined into one finalized scene document.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/dress.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/layout.hpp"
#include "scenesmith/physicalize.hpp"
#include "scenesmith/rng.hpp"
#include "scenesmith/scenefile.hpp"

namespace scenesmith {

// Interactables requested per room type when a config gives none.
inline std::map<RoomType, std::vector<std::string>> default_interactables() {
  return {
      {RoomType::kKitchen,
       {"fridge", "microwave", "stove", "dish_rack", "bowl", "food", "dish", "sponge"}},
      {RoomType::kLivingRoom,
       {"book", "book", "cup", "pitcher", "trash_bin", "trash", "cabinet", "painting"}},
      {RoomType::kBedroom,
       {"pillow", "alarm_clock", "closet", "dresser", "clothing", "hanger", "book"}},
  };
}

struct GenerateOptions {
  DressProfile profile = DressProfile::kDefault;
  std::map<RoomType, std::vector<std::string>> interactables = default_interactables();
  std::map<std::string, std::string> material_overrides;
  int furnish_attempts = 5;
};

// Assets, materials and rules referenced by the scene.
inline Catalog catalog_subset(const Catalog& catalog, const SceneGraph& scene,
                              const std::vector<MaterialAssignment>& materials) {
  std::set<std::string> asset_ids;
  for (const auto& p : scene.placed) asset_ids.insert(p.asset_id);
  std::set<std::string> material_ids;
  for (const auto& m : materials) material_ids.insert(m.material_id);
  std::vector<AssetRecord> assets;
  for (const auto& a : catalog.assets()) {
    if (asset_ids.count(a.asset_id)) assets.push_back(a);
  }
  std::vector<MaterialRecord> mats;
  for (const auto& m : catalog.materials()) {
    if (material_ids.count(m.material_id)) mats.push_back(m);
  }
  std::vector<CoOccurrenceRule> rules;
  for (const auto& r : catalog.rules()) {
    bool subject = false;
    bool object = false;
    for (const auto& a : assets) {
      subject = subject || reference_matches(a, r.subject);
      object = object || reference_matches(a, r.object);
    }
    if (subject && object) rules.push_back(r);
  }
  return Catalog(std::move(assets), std::move(mats), std::move(rules));
}

// Furnishing seed for one attempt; attempt 0 uses the variant seed itself.
inline std::uint64_t furnish_seed(std::uint64_t variant_seed, int attempt) {
  return attempt == 0 ? variant_seed
                      : derive_seed(variant_seed, "furnish/attempt/" + std::to_string(attempt));
}

// The layout seed fixes the floorplan; the variant seed drives furnishing,
// materials and physics. Ceiling and window lights follow the layout seed
// unless the domain-randomized profile is active.
inline SceneDocument generate_scene(const LayoutSpec& spec, const Catalog& catalog,
                                    std::uint64_t layout_seed, std::uint64_t variant_seed,
                                    const GenerateOptions& options = {},
                                    const std::string& scene_key = "") {
  FloorPlan plan = generate_floorplan(spec, catalog, layout_seed, furnishable(catalog));
  SceneGraph scene;
  std::uint64_t seed = 0;
  for (int attempt = 0;; ++attempt) {
    seed = furnish_seed(variant_seed, attempt);
    try {
      scene = place_basic_assets(plan, catalog, seed);
      break;
    } catch (const PlacementExhausted&) {
      if (attempt + 1 >= options.furnish_attempts) throw;
    }
  }
  std::vector<const Room*> rooms = scene.plan.all_rooms();
  std::vector<std::pair<std::string, RoomType>> room_order;
  for (const Room* r : rooms) room_order.emplace_back(r->room_id, r->room_type);
  std::sort(room_order.begin(), room_order.end());
  for (const auto& [room_id, type] : room_order) {
    auto it = options.interactables.find(type);
    if (it == options.interactables.end()) continue;
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      const std::uint64_t s = derive_seed(seed, "interactables/" + room_id + "/" + std::to_string(k));
      try {
        scene = place_interactables(scene, catalog, {{it->second[k], room_id}}, s);
      } catch (const PlacementExhausted&) {
      } catch (const SemanticMismatch&) {
      } catch (const RuleConflict&) {
      } catch (const CatalogGap&) {
      }
    }
  }

  SceneDocument doc;
  doc.generation.seed = variant_seed;
  doc.generation.layout_seed = layout_seed;
  doc.generation.scene_key = scene_key;
  doc.generation.profile = options.profile;
  doc.materials = assign_materials(scene, catalog, variant_seed, options.material_overrides, options.profile);
  doc.lights = place_lights(scene, options.profile == DressProfile::kDefault ? layout_seed : variant_seed,
                            options.profile);
  doc.physics = annotate_physics(scene, catalog, variant_seed);
  for (auto& a : annotate_architecture(scene.plan)) doc.physics.push_back(std::move(a));
  doc.joints = configure_joints(scene, catalog, variant_seed);
  doc.catalog_subset = catalog_subset(catalog, scene, doc.materials);
  doc.scene = std::move(scene);
  finalize(doc);
  return doc;
}

}  // namespace scenesmith
