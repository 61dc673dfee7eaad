#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scenesmith;

namespace {

const AssetRecord& asset(const std::string& id) {
  const AssetRecord* a = fixtures::catalog().find(id);
  if (!a) throw std::runtime_error("missing asset " + id);
  return *a;
}

const AssetRecord& first_where(const std::function<bool(const AssetRecord&)>& pred) {
  for (const auto& a : fixtures::catalog().assets()) {
    if (pred(a)) return a;
  }
  throw std::runtime_error("no matching asset");
}

// A scene holding `n` unplaced copies of each asset; annotation ignores poses.
SceneGraph copies(const std::vector<const AssetRecord*>& assets, int n) {
  SceneGraph s;
  for (const AssetRecord* a : assets) {
    for (int i = 0; i < n; ++i) {
      PlacedAsset p;
      p.instance_id = a->asset_id + "#" + std::to_string(i);
      p.asset_id = a->asset_id;
      p.size = a->bounds;
      s.placed.push_back(p);
    }
  }
  return s;
}

// Density table, kg/m^3, applied to 40% of the bounding volume.
double oracle_mass(const AssetRecord& a) {
  static const std::map<MaterialClass, double> density = {
      {MaterialClass::kWood, 600},   {MaterialClass::kMetal, 2500},   {MaterialClass::kCeramic, 2000},
      {MaterialClass::kFabric, 200}, {MaterialClass::kPlastic, 400},  {MaterialClass::kGlass, 2200},
      {MaterialClass::kStone, 2600}, {MaterialClass::kOrganic, 800}};
  return a.mass_hint ? *a.mass_hint : density.at(a.material_class) * 0.4 * a.bounds.x * a.bounds.y * a.bounds.z;
}

}  // namespace

TEST(AnnotatePhysics, WoodenChairAndMetalAsset) {
  const auto& chair = first_where([](const AssetRecord& a) {
    return a.object_class == "chair" && a.material_class == MaterialClass::kWood;
  });
  const auto& metal = first_where([](const AssetRecord& a) { return a.material_class == MaterialClass::kMetal; });
  const SceneGraph s = copies({&chair, &metal}, 50);
  for (const auto& a : annotate_physics(s, fixtures::catalog(), 3)) {
    const bool wood = a.instance_id.rfind(chair.asset_id, 0) == 0;
    EXPECT_GE(a.static_friction, wood ? 0.3 : 0.15);
    EXPECT_LE(a.static_friction, wood ? 0.5 : 0.25);
  }
}

TEST(AnnotatePhysics, FrictionSamplingMatchesRanges) {
  const auto& wood = first_where([](const AssetRecord& a) { return a.material_class == MaterialClass::kWood; });
  const auto& metal = first_where([](const AssetRecord& a) { return a.material_class == MaterialClass::kMetal; });
  const SceneGraph s = copies({&wood, &metal}, 100);
  oracle::Moments w;
  oracle::Moments m;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto& a : annotate_physics(s, fixtures::catalog(), seed)) {
      (a.instance_id.rfind(wood.asset_id, 0) == 0 ? w : m).add(a.static_friction);
    }
  }
  ASSERT_EQ(w.n, 10000u);
  ASSERT_EQ(m.n, 10000u);
  EXPECT_GE(w.lo, 0.3);
  EXPECT_LE(w.hi, 0.5);
  EXPECT_GE(m.lo, 0.15);
  EXPECT_LE(m.hi, 0.25);
  EXPECT_NEAR(w.mean(), 0.40, 0.02);
  EXPECT_NEAR(m.mean(), 0.20, 0.02);
}

TEST(AnnotatePhysics, MassHintPassesThrough) {
  AssetRecord a = asset("apple");
  a.mass_hint = 1.2;
  EXPECT_EQ(asset_mass(a), 1.2);
  a.mass_hint.reset();
  a.material_class = MaterialClass::kWood;
  a.bounds = {1.0, 0.5, 0.2};
  EXPECT_DOUBLE_EQ(asset_mass(a), 600 * 0.4 * 0.1);
}

TEST(AnnotatePhysics, CorpusInvariants) {
  for (const auto& doc : fixtures::corpus()) {
    const auto ann = annotate_physics(doc.scene, fixtures::catalog(), doc.generation.seed);
    ASSERT_EQ(ann.size(), doc.scene.placed.size());
    for (const auto& a : ann) {
      const AssetRecord& rec = asset(doc.scene.find(a.instance_id)->asset_id);
      EXPECT_LE(a.dynamic_friction, a.static_friction);
      EXPECT_NEAR(a.dynamic_friction, 0.8 * a.static_friction, 1e-12);
      EXPECT_GE(a.restitution, 0.0);
      EXPECT_LE(a.restitution, 1.0);
      EXPECT_GT(a.mass, 0.0);
      EXPECT_NEAR(a.mass, oracle_mass(rec), 1e-12 * oracle_mass(rec));
      EXPECT_EQ(a.dynamic, rec.category == Category::kInteractable);
    }
    EXPECT_EQ(ann, annotate_physics(doc.scene, fixtures::catalog(), doc.generation.seed));
  }
}

TEST(AnnotatePhysics, ArchitectureIsStaticBoxes) {
  const auto& plan = fixtures::corpus()[0].scene.plan;
  const auto ann = annotate_architecture(plan);
  std::size_t expected = 0;
  for (const auto& f : plan.floors) expected += f.walls.size() + f.rooms.size();
  EXPECT_EQ(ann.size(), expected);
  for (const auto& a : ann) {
    EXPECT_EQ(a.collider.kind, ColliderKind::kBox);
    EXPECT_FALSE(a.dynamic);
    EXPECT_GT(a.mass, 0.0);
  }
}

TEST(SelectCollider, Examples) {
  EXPECT_EQ(select_collider(asset("apple")).kind, ColliderKind::kConvexHull);
  const auto& microwave = first_where([](const AssetRecord& a) { return a.object_class == "microwave"; });
  EXPECT_EQ(select_collider(microwave).kind, ColliderKind::kConvexDecomposition);
  EXPECT_EQ(architecture_collider().kind, ColliderKind::kBox);
}

TEST(SelectCollider, RuleTableOverWholeCatalog) {
  for (const auto& a : fixtures::catalog().assets()) {
    ColliderKind want = ColliderKind::kConvexHull;
    if (a.articulation || a.subtype == Subtype::kContainer || a.subtype == Subtype::kFurniture ||
        a.subtype == Subtype::kAppliance) {
      want = ColliderKind::kConvexDecomposition;
    }
    if (!a.articulation && a.high_fidelity) want = ColliderKind::kSdfMesh;
    const ColliderSpec c = select_collider(a);
    EXPECT_EQ(c.kind, want) << a.asset_id;
    if (a.articulation) EXPECT_NE(c.kind, ColliderKind::kConvexHull) << a.asset_id;
    if (a.subtype == Subtype::kFood) EXPECT_EQ(c.kind, ColliderKind::kConvexHull) << a.asset_id;
    EXPECT_EQ(c.source, a.mesh_ref.empty() ? "bounds" : a.mesh_ref);
  }
}

TEST(ConfigureJoints, DoorRevoluteDrawerPrismatic) {
  AssetRecord cab = asset(first_where([](const AssetRecord& a) { return a.object_class == "cabinet"; }).asset_id);
  const JointSpec door = joint_for(cab, {"door", JointKindHint::kDoorLike, 110.0});
  EXPECT_EQ(door.joint_type, JointType::kRevolute);
  EXPECT_NEAR(door.upper, 110.0 * std::acos(-1.0) / 180.0, 1e-12);
  const JointSpec drawer = joint_for(cab, {"drawer", JointKindHint::kDrawerLike, 0.3});
  EXPECT_EQ(drawer.joint_type, JointType::kPrismatic);
  EXPECT_DOUBLE_EQ(drawer.upper, std::min(0.3, cab.bounds.y));
  const JointSpec button = joint_for(cab, {"button", JointKindHint::kButtonLike, 0.02});
  EXPECT_EQ(button.joint_type, JointType::kPrismatic);
  EXPECT_LE(button.upper, 0.005);
  const JointSpec wide = joint_for(cab, {"door", JointKindHint::kDoorLike, 270.0});
  EXPECT_LE(wide.upper, std::acos(-1.0));
}

TEST(ConfigureJoints, CorpusInvariants) {
  for (const auto& doc : fixtures::corpus()) {
    const auto joints = configure_joints(doc.scene, fixtures::catalog(), doc.generation.seed);
    std::map<std::string, std::size_t> per_instance;
    for (const auto& j : joints) {
      ++per_instance[j.instance_id];
      const AssetRecord& a = asset(doc.scene.find(j.instance_id)->asset_id);
      ASSERT_TRUE(a.articulation.has_value());
      const auto part = std::find_if(a.articulation->parts.begin(), a.articulation->parts.end(),
                                     [&](const ArticulationPart& p) { return p.part_id == j.part_id; });
      ASSERT_NE(part, a.articulation->parts.end());
      EXPECT_EQ(j.joint_type, part->joint == JointKindHint::kDoorLike ? JointType::kRevolute : JointType::kPrismatic);
      EXPECT_LT(j.lower, j.upper);
      EXPECT_NEAR(std::hypot(j.axis.x, j.axis.y, j.axis.z), 1.0, 1e-9);
      if (j.joint_type == JointType::kRevolute) EXPECT_LE(j.upper, std::acos(-1.0));
      if (j.joint_type == JointType::kPrismatic) {
        EXPECT_LE(j.upper, std::abs(j.axis.x) * a.bounds.x + std::abs(j.axis.y) * a.bounds.y +
                               std::abs(j.axis.z) * a.bounds.z + 1e-12);
      }
      if (part->joint == JointKindHint::kButtonLike) EXPECT_LE(j.upper, 0.005);
      const FrictionRange r = friction_range(a.material_class);
      EXPECT_TRUE(r.contains(j.joint_friction));
      EXPECT_GE(j.stiffness, 0.0);
      EXPECT_GE(j.damping, 0.0);
    }
    for (const auto& p : doc.scene.placed) {
      const AssetRecord& a = asset(p.asset_id);
      const std::size_t want = a.articulation ? a.articulation->parts.size() : 0;
      EXPECT_EQ(per_instance[p.instance_id], want) << p.instance_id;
    }
  }
}

TEST(ConfigureJoints, RigidAppleHasNone) {
  EXPECT_TRUE(configure_joints(copies({&asset("apple")}, 3), fixtures::catalog(), 1).empty());
}

TEST(ConfigureJoints, ArticulatedClassWithoutTemplate) {
  Json j = fixtures::catalog_json();
  std::string id;
  for (auto& a : j["assets"]) {
    if (a["object_class"] == "fridge") {
      a.erase("articulation");
      id = a["asset_id"];
      break;
    }
  }
  const Catalog c = catalog_from_json(j);
  EXPECT_THROW(configure_joints(copies({c.find(id)}, 1), c, 1), MissingTemplate);
}

TEST(FrictionTable, ExtendedClassesAreWithinUnitInterval) {
  for (auto mc : {MaterialClass::kWood, MaterialClass::kMetal, MaterialClass::kCeramic, MaterialClass::kFabric,
                  MaterialClass::kPlastic, MaterialClass::kGlass, MaterialClass::kStone, MaterialClass::kOrganic}) {
    const FrictionRange r = friction_range(mc);
    EXPECT_GT(r.lo, 0.0);
    EXPECT_LT(r.lo, r.hi);
    EXPECT_LE(r.hi, 1.0);
  }
  EXPECT_DOUBLE_EQ(friction_range(MaterialClass::kWood).mean(), 0.4);
  EXPECT_DOUBLE_EQ(friction_range(MaterialClass::kMetal).mean(), 0.2);
  EXPECT_THROW(friction_range(static_cast<MaterialClass>(99)), UnknownMaterialClass);
}
