#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scenesmith;

namespace {

// Target class by id shape, independent of the library's target listing.
std::string class_of(const SceneGraph& s, const std::string& target) {
  if (target.rfind("floor:", 0) == 0) return "floor";
  if (target.rfind("ceiling:", 0) == 0) return "ceiling";
  if (const PlacedAsset* p = s.find(target)) {
    return "asset:" + std::string(to_string(fixtures::catalog().find(p->asset_id)->material_class));
  }
  return "wall";
}

std::size_t expected_targets(const SceneGraph& s) {
  std::size_t n = s.placed.size();
  for (const auto& f : s.plan.floors) n += f.walls.size() + 2 * f.rooms.size();
  return n;
}

const SceneGraph& furnished() { return fixtures::corpus()[0].scene; }

}  // namespace

TEST(AssignMaterials, TotalAndCompatible) {
  for (const auto& doc : fixtures::corpus()) {
    const auto m = assign_materials(doc.scene, fixtures::catalog(), 3);
    EXPECT_EQ(m.size(), expected_targets(doc.scene));
    std::set<std::string> seen;
    for (const auto& a : m) {
      EXPECT_TRUE(seen.insert(a.target).second) << a.target;
      const MaterialRecord* rec = fixtures::catalog().find_material(a.material_id);
      ASSERT_NE(rec, nullptr);
      EXPECT_TRUE(rec->applicable_to.count(class_of(doc.scene, a.target))) << a.target << " " << a.material_id;
    }
  }
}

TEST(AssignMaterials, DefaultProfileFamilies) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = assign_materials(furnished(), fixtures::catalog(), seed);
    for (const auto& a : m) {
      const auto family = fixtures::catalog().find_material(a.material_id)->family;
      const std::string cls = class_of(furnished(), a.target);
      if (cls == "wall") {
        EXPECT_TRUE(family == MaterialFamily::kMarble || family == MaterialFamily::kBrick ||
                    family == MaterialFamily::kPaint || family == MaterialFamily::kTile);
      }
      if (cls == "asset:wood") EXPECT_EQ(family, MaterialFamily::kWoodGrain) << a.target;
    }
  }
}

TEST(AssignMaterials, WallsOfOneRoomShareAMaterial) {
  const SceneGraph& s = furnished();
  const auto m = assign_materials(s, fixtures::catalog(), 11);
  std::map<std::string, std::set<std::string>> per_room;
  for (const auto& a : m) {
    const WallSegment* w = s.plan.find_wall(a.target);
    if (w) per_room[w->room_a].insert(a.material_id);
  }
  EXPECT_FALSE(per_room.empty());
  for (const auto& [room, mats] : per_room) EXPECT_EQ(mats.size(), 1u) << room;
}

TEST(AssignMaterials, OverridesHonoredWhenCompatible) {
  const SceneGraph& s = furnished();
  const std::string wall = s.plan.floors[0].walls[3].wall_id;
  const auto m = assign_materials(s, fixtures::catalog(), 1, {{wall, "wall_brick_red"}});
  const auto it = std::find_if(m.begin(), m.end(), [&](const auto& a) { return a.target == wall; });
  ASSERT_NE(it, m.end());
  EXPECT_EQ(it->material_id, "wall_brick_red");
}

TEST(AssignMaterials, FabricOnWallIsIncompatible) {
  const SceneGraph& s = furnished();
  const std::string wall = s.plan.floors[0].walls[3].wall_id;
  EXPECT_THROW(assign_materials(s, fixtures::catalog(), 1, {{wall, "fabric_linen"}}), IncompatibleOverride);
  EXPECT_THROW(assign_materials(s, fixtures::catalog(), 1, {{"no_such_target", "wall_brick_red"}}),
               IncompatibleOverride);
  EXPECT_THROW(assign_materials(s, fixtures::catalog(), 1, {{wall, "no_such_material"}}), IncompatibleOverride);
}

TEST(AssignMaterials, MissingCeilingMaterialNamesTarget) {
  Json j = fixtures::catalog_json();
  Json kept = Json::array();
  for (const auto& m : j["materials"]) {
    const auto& to = m["applicable_to"];
    if (std::find(to.begin(), to.end(), "ceiling") == to.end()) kept.push_back(m);
  }
  j["materials"] = kept;
  const Catalog c = catalog_from_json(j);
  try {
    assign_materials(furnished(), c, 1);
    FAIL() << "expected NoCompatibleMaterial";
  } catch (const NoCompatibleMaterial& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("ceiling:"), std::string::npos) << what;
    EXPECT_NE(what.find("(ceiling)"), std::string::npos) << what;
  }
}

TEST(AssignMaterials, DeterministicAndSeedSensitive) {
  const SceneGraph& s = furnished();
  EXPECT_EQ(assign_materials(s, fixtures::catalog(), 5), assign_materials(s, fixtures::catalog(), 5));
  int differ = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    if (assign_materials(s, fixtures::catalog(), 2 * k) != assign_materials(s, fixtures::catalog(), 2 * k + 1)) {
      ++differ;
    }
  }
  EXPECT_GE(differ, 199);
}

TEST(AssignMaterials, RandomizedProfileUsesWholeCompatibleSet) {
  std::set<MaterialFamily> wood;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const auto& a : assign_materials(furnished(), fixtures::catalog(), seed, {}, DressProfile::kDomainRandomized)) {
      if (class_of(furnished(), a.target) == "asset:wood") {
        wood.insert(fixtures::catalog().find_material(a.material_id)->family);
      }
    }
  }
  EXPECT_TRUE(wood.count(MaterialFamily::kPaint));
  EXPECT_TRUE(wood.count(MaterialFamily::kWoodGrain));
}

TEST(PlaceLights, CeilingLightPerRoomAtCentroid) {
  for (const auto& doc : fixtures::corpus()) {
    const auto lights = place_lights(doc.scene, 4);
    for (const Room* r : doc.scene.plan.all_rooms()) {
      const auto it = std::find_if(lights.begin(), lights.end(), [&](const LightSpec& l) {
        return l.room_id == r->room_id && l.kind == LightKind::kCeiling;
      });
      ASSERT_NE(it, lights.end()) << r->room_id;
      const auto inner = oracle::points(r->interior);
      EXPECT_TRUE(oracle::inside(inner, {it->position.x, it->position.y})) << r->room_id;
      // Area-weighted centroid by the shoelace formula.
      double a = 0, cx = 0, cy = 0;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        const auto [x0, y0] = inner[i];
        const auto [x1, y1] = inner[(i + 1) % inner.size()];
        const double cross = x0 * y1 - x1 * y0;
        a += cross;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
      }
      cx /= 3 * a;
      cy /= 3 * a;
      if (oracle::inside(inner, {cx, cy})) {
        EXPECT_NEAR(it->position.x, cx, 1e-9);
        EXPECT_NEAR(it->position.y, cy, 1e-9);
      }
    }
  }
}

TEST(PlaceLights, ThreeRoomSceneHasAtLeastThreeLights) {
  const FloorPlan plan = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 6);
  const SceneGraph s = place_basic_assets(plan, fixtures::catalog(), 6);
  const auto lights = place_lights(s, 6);
  EXPECT_GE(lights.size(), 3u);
  for (const auto& l : lights) {
    EXPECT_GE(l.intensity, 50.0);
    EXPECT_LE(l.intensity, 20000.0);
  }
}

TEST(PlaceLights, PhotometryWithinBoundsOverManySeeds) {
  std::vector<double> intensity;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto& doc = fixtures::corpus()[seed % fixtures::corpus().size()];
    const auto profile = seed % 2 ? DressProfile::kDomainRandomized : DressProfile::kDefault;
    for (const auto& l : place_lights(doc.scene, seed, profile)) {
      ++n;
      EXPECT_GE(l.intensity, 50.0);
      EXPECT_LE(l.intensity, 20000.0);
      EXPECT_GE(l.color_temperature, 2700.0);
      EXPECT_LE(l.color_temperature, 6500.0);
      EXPECT_GE(l.exposure, -5.0);
      EXPECT_LE(l.exposure, 5.0);
      if (profile == DressProfile::kDefault) EXPECT_EQ(l.exposure, 0.0);
      intensity.push_back(l.intensity);
    }
  }
  EXPECT_GE(n, 3000u);
  // Log-uniform over [50, 20000]: half the mass lies below the geometric mean.
  const double gm = std::sqrt(50.0 * 20000.0);
  const double below = static_cast<double>(std::count_if(intensity.begin(), intensity.end(),
                                                         [&](double v) { return v < gm; })) /
                       static_cast<double>(intensity.size());
  EXPECT_NEAR(below, 0.5, 0.03);
}

TEST(PlaceLights, ColorTemperatureOverTenThousandDraws) {
  Rng rng(1, "photometry");
  oracle::Moments m;
  for (int i = 0; i < 10000; ++i) {
    LightSpec l;
    dress_detail::sample_photometry(l, rng, DressProfile::kDomainRandomized);
    ASSERT_GE(l.color_temperature, 2700.0);
    ASSERT_LE(l.color_temperature, 6500.0);
    ASSERT_GE(l.exposure, -5.0);
    ASSERT_LE(l.exposure, 5.0);
    m.add(l.color_temperature);
  }
  EXPECT_NEAR(m.mean(), 4600.0, 30.0);
}

TEST(PlaceLights, Deterministic) {
  EXPECT_EQ(place_lights(furnished(), 9), place_lights(furnished(), 9));
  EXPECT_NE(place_lights(furnished(), 9), place_lights(furnished(), 10));
}
