#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scenesmith;

namespace {

const TaskTemplate& tmpl(const std::string& id) {
  for (const auto& t : fixtures::templates()) {
    if (t.template_id == id) return t;
  }
  throw std::runtime_error("no template " + id);
}

bool has_room(const SceneDocument& d, RoomType t) {
  for (const Room* r : d.scene.plan.all_rooms()) {
    if (r->room_type == t) return true;
  }
  return false;
}

const SceneDocument& kitchen_scene() {
  for (const auto& d : fixtures::corpus()) {
    if (has_room(d, RoomType::kKitchen)) return d;
  }
  throw std::runtime_error("no kitchen in corpus");
}

const PlacedAsset* bound(const SceneDocument& d, const TaskInstance& inst, const std::string& role) {
  const std::string& id = inst.bindings.at(role);
  for (const auto& p : inst.spawned) {
    if (p.instance_id == id) return &p;
  }
  return d.scene.find(id);
}

const Opening* find_opening(const FloorPlan& plan, const std::string& id) {
  for (const auto& f : plan.floors) {
    for (const auto& o : f.openings) {
      if (o.opening_id == id) return &o;
    }
  }
  return nullptr;
}

// Filter re-check written against the record fields directly.
bool satisfies(const RoleFilter& f, const AssetRecord& a) {
  if (!f.object_class.empty() && !f.object_class.count(a.object_class)) return false;
  if (!f.subtype.empty() && !f.subtype.count(a.subtype)) return false;
  if (f.tag && !a.placement_tags.count(*f.tag)) return false;
  if (f.joint) {
    if (!a.articulation) return false;
    bool any = false;
    for (const auto& p : a.articulation->parts) any = any || p.joint == *f.joint;
    if (!any) return false;
  }
  return true;
}

Catalog without_articulated() {
  Json j = fixtures::catalog_json();
  Json kept = Json::array();
  for (const auto& a : j["assets"]) {
    if (!a.contains("articulation")) kept.push_back(a);
  }
  j["assets"] = kept;
  return catalog_from_json(j);
}

}  // namespace

TEST(TaskTemplates, ShippedTableMatchesDatasetRows) {
  const auto& ts = fixtures::templates();
  ASSERT_EQ(ts.size(), oracle::kDatasetTable.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(ts[i].template_id, oracle::kDatasetTable[i].template_id);
    EXPECT_EQ(ts[i].default_counts.n_assets, oracle::kDatasetTable[i].n_assets);
    EXPECT_EQ(ts[i].default_counts.n_sequences, oracle::kDatasetTable[i].n_sequences);
    EXPECT_FALSE(ts[i].roles.empty());
    if (ts[i].tier == Tier::kBasic) EXPECT_LE(ts[i].goal.size(), 2u);
    if (ts[i].tier == Tier::kMultistage) EXPECT_GE(ts[i].goal.size(), 2u);
    EXPECT_NO_THROW(validate_template(ts[i]));
  }
}

TEST(TaskTemplates, BasicWithThreeGoalsRejected) {
  TaskTemplate t = tmpl("store_dish_in_fridge");
  t.tier = Tier::kBasic;
  EXPECT_THROW(validate_template(t), InvalidSpec);
  t = tmpl("pick_place_into_bowl");
  t.roles.clear();
  EXPECT_THROW(validate_template(t), InvalidSpec);
}

TEST(InstantiateTask, ObjectsIntoBowl) {
  const SceneDocument& d = kitchen_scene();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TaskInstance inst = instantiate_task(d, tmpl("pick_place_into_bowl"), fixtures::catalog(), seed);
    const PlacedAsset* obj = bound(d, inst, "object");
    const PlacedAsset* bowl = bound(d, inst, "container");
    ASSERT_NE(obj, nullptr);
    ASSERT_NE(bowl, nullptr);
    EXPECT_EQ(fixtures::catalog().find(obj->asset_id)->subtype, Subtype::kFood);
    EXPECT_EQ(fixtures::catalog().find(bowl->asset_id)->object_class, "bowl");
    ASSERT_EQ(inst.goal.size(), 1u);
    EXPECT_EQ(inst.goal[0].kind, PredicateKind::kIn);
    EXPECT_EQ(inst.goal[0].subject, obj->instance_id);
    EXPECT_EQ(inst.goal[0].object, bowl->instance_id);
    EXPECT_EQ(inst.scene_hash, d.content_hash);
    EXPECT_EQ(inst.language_instruction.find('{'), std::string::npos) << inst.language_instruction;
    EXPECT_NE(inst.language_instruction.find("bowl"), std::string::npos) << inst.language_instruction;
  }
}

TEST(InstantiateTask, NoArticulatedAssetMeansUnsatisfiableTarget) {
  const Catalog c = without_articulated();
  SceneDocument d;
  d.scene = place_basic_assets(generate_floorplan(fixtures::spec({RoomType::kKitchen}, 6, 5), c, 1), c, 1);
  try {
    instantiate_task(d, tmpl("open_close_furniture_door"), c, 1);
    FAIL() << "expected UnsatisfiableRole";
  } catch (const UnsatisfiableRole& e) {
    EXPECT_NE(std::string(e.what()).find("target"), std::string::npos) << e.what();
  }
}

TEST(InstantiateTask, WrongRoomType) {
  SceneDocument d;
  d.scene = place_basic_assets(generate_floorplan(fixtures::spec({RoomType::kKitchen}, 6, 5), fixtures::catalog(), 1),
                               fixtures::catalog(), 1);
  EXPECT_THROW(instantiate_task(d, tmpl("make_bed"), fixtures::catalog(), 1), RoomMismatch);
}

TEST(InstantiateTask, StoreDishGoalSequence) {
  const SceneDocument& d = kitchen_scene();
  const TaskInstance inst = instantiate_task(d, tmpl("store_dish_in_fridge"), fixtures::catalog(), 4);
  const std::string fridge = inst.bindings.at("fridge");
  const std::string dish = inst.bindings.at("dish");
  ASSERT_EQ(inst.goal.size(), 3u);
  EXPECT_EQ(inst.goal[0].kind, PredicateKind::kJointAt);
  EXPECT_EQ(inst.goal[0].subject, fridge);
  EXPECT_GT(inst.goal[0].value, 0.0);
  EXPECT_EQ(inst.goal[1].kind, PredicateKind::kIn);
  EXPECT_EQ(inst.goal[1].subject, dish);
  EXPECT_EQ(inst.goal[1].object, fridge);
  EXPECT_EQ(inst.goal[2].kind, PredicateKind::kJointAt);
  EXPECT_EQ(inst.goal[2].subject, fridge);
  EXPECT_EQ(inst.goal[2].part, inst.goal[0].part);
  EXPECT_EQ(inst.goal[2].value, 0.0);
  const PlacedAsset* dish_p = bound(d, inst, "dish");
  ASSERT_NE(dish_p, nullptr);
  EXPECT_EQ(dish_p->parent, inst.bindings.at("table"));
}

TEST(InstantiateTask, EveryBindingResolvesAndSatisfiesItsFilter) {
  int instantiated = 0;
  for (const auto& d : fixtures::corpus()) {
    for (const auto& t : fixtures::templates()) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        TaskInstance inst;
        try {
          inst = instantiate_task(d, t, fixtures::catalog(), seed);
        } catch (const RoomMismatch&) {
          continue;
        } catch (const UnsatisfiableRole&) {
          continue;
        }
        ++instantiated;
        std::set<std::string> ids;
        for (const auto& role : t.roles) {
          ASSERT_TRUE(inst.bindings.count(role.name)) << t.template_id << " " << role.name;
          const std::string& id = inst.bindings.at(role.name);
          ids.insert(id);
          if (role.kind == RoleKind::kOpening) {
            const Opening* o = find_opening(d.scene.plan, id);
            ASSERT_NE(o, nullptr) << id;
            if (!role.filter.opening_kind.empty()) EXPECT_TRUE(role.filter.opening_kind.count(o->kind));
            continue;
          }
          const PlacedAsset* p = bound(d, inst, role.name);
          ASSERT_NE(p, nullptr) << t.template_id << " " << role.name << " -> " << id;
          EXPECT_TRUE(satisfies(role.filter, *fixtures::catalog().find(p->asset_id))) << t.template_id << " " << id;
          if (t.room_requirement != RoomType::kAny) {
            EXPECT_EQ(d.scene.plan.find_room(p->room_id)->room_type, t.room_requirement);
          }
        }
        for (const auto& g : inst.goal) {
          EXPECT_TRUE(ids.count(g.subject)) << t.template_id << " " << g.subject;
          if (g.kind == PredicateKind::kIn || g.kind == PredicateKind::kOn) EXPECT_TRUE(ids.count(g.object));
        }
        for (const auto& [key, value] : inst.initial_joint_states) {
          EXPECT_TRUE(ids.count(key.substr(0, key.find('/')))) << key;
          EXPECT_GE(value, 0.0);
        }
      }
    }
  }
  EXPECT_GT(instantiated, 100);
}

TEST(InstantiateTask, Deterministic) {
  const SceneDocument& d = kitchen_scene();
  const auto& t = tmpl("heat_food");
  EXPECT_EQ(instantiate_task(d, t, fixtures::catalog(), 8), instantiate_task(d, t, fixtures::catalog(), 8));
}

TEST(BatchManifest, BowlTenByTen) {
  const auto m = batch_manifest({tmpl("pick_place_into_bowl")}, fixtures::corpus(), fixtures::catalog(),
                                {{"pick_place_into_bowl", {10, 10}}}, 1);
  ASSERT_EQ(m.batches.size(), 1u);
  const auto& b = m.batches[0];
  EXPECT_EQ(b.instances.size(), 100u);
  EXPECT_EQ(std::set<std::string>(b.primary_assets.begin(), b.primary_assets.end()).size(), 10u);
  std::map<std::string, int> per_asset;
  for (const auto& i : b.instances) ++per_asset[i.primary_asset];
  EXPECT_EQ(per_asset.size(), 10u);
  for (const auto& [a, n] : per_asset) EXPECT_EQ(n, 10) << a;
}

TEST(BatchManifest, StoreDishFiveByThirty) {
  const auto m = batch_manifest({tmpl("store_dish_in_fridge")}, fixtures::corpus(), fixtures::catalog(), {}, 2);
  EXPECT_EQ(m.total_instances(), 150u);
}

TEST(BatchManifest, TooFewCandidatesIsInsufficient) {
  Json j = fixtures::catalog_json();
  Json kept = Json::array();
  int clocks = 0;
  for (const auto& a : j["assets"]) {
    if (a["object_class"] == "alarm_clock" && ++clocks > 2) continue;
    kept.push_back(a);
  }
  j["assets"] = kept;
  const Catalog c = catalog_from_json(j);
  EXPECT_THROW(batch_manifest({tmpl("set_alarm")}, fixtures::corpus(), c, {{"set_alarm", {3, 1}}}, 1),
               InsufficientAssets);
}

TEST(BatchManifest, SeedsUniqueAndTotalsExact) {
  std::map<std::string, TaskCounts> counts;
  for (const auto& t : fixtures::templates()) counts[t.template_id] = {2, 3};
  const auto m = batch_manifest(fixtures::templates(), fixtures::corpus(), fixtures::catalog(), counts, 5);
  EXPECT_EQ(m.total_instances(), 18u * 6u);
  std::set<std::uint64_t> seeds;
  for (const auto& b : m.batches) {
    EXPECT_EQ(b.instances.size(), 6u) << b.template_id;
    for (const auto& i : b.instances) {
      EXPECT_TRUE(seeds.insert(i.episode_seed).second);
      EXPECT_TRUE(m.scenes.count(i.scene_hash));
    }
  }
  const auto again = batch_manifest(fixtures::templates(), fixtures::corpus(), fixtures::catalog(), counts, 5);
  EXPECT_EQ(serialize_manifest(m), serialize_manifest(again));
  EXPECT_EQ(m.embodiment, "unitree_g1");
}

TEST(BatchManifest, VaryScenesSpreadsSequences) {
  BatchOptions o;
  o.vary_scenes = true;
  const auto m = batch_manifest({tmpl("make_bed")}, fixtures::corpus(), fixtures::catalog(), {{"make_bed", {1, 4}}}, 3, o);
  std::set<std::string> scenes;
  for (const auto& i : m.batches[0].instances) scenes.insert(i.scene_hash);
  EXPECT_GT(scenes.size(), 1u);
  EXPECT_TRUE(m.vary_scenes);
}

TEST(BatchManifest, UnknownEmbodimentRejected) {
  BatchOptions o;
  o.embodiment = "hexapod";
  EXPECT_THROW(batch_manifest(fixtures::templates(), fixtures::corpus(), fixtures::catalog(), {}, 1, o), InvalidSpec);
}
