#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scenesmith;

namespace {

Room rect_room(double w, double h) {
  Room r;
  r.room_id = "f0_r00";
  r.polygon = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  r.interior = r.polygon;
  return r;
}

double segment_distance(oracle::P p, oracle::P a, oracle::P b) {
  const double dx = b.first - a.first;
  const double dy = b.second - a.second;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.first - a.first) * dx + (p.second - a.second) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.first - (a.first + t * dx), p.second - (a.second + t * dy));
}

double boundary_distance(const std::vector<oracle::P>& poly, oracle::P p) {
  double d = 1e300;
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

}  // namespace

TEST(ScoreRoom, Rectangle4x2) {
  const RoomScore s = score_room(rect_room(4, 2));
  EXPECT_DOUBLE_EQ(s.aspect_ratio, 2.0);
  EXPECT_DOUBLE_EQ(s.fill_ratio, 1.0);
}

TEST(ScoreRoom, LShapeWithCornerNotch) {
  Room r;
  r.polygon = {{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  const RoomScore s = score_room(r);
  EXPECT_DOUBLE_EQ(s.aspect_ratio, 1.0);
  EXPECT_DOUBLE_EQ(s.fill_ratio, 0.75);
}

TEST(ScoreRoom, ZeroAreaIsDegenerate) {
  Room r;
  r.polygon = {{0, 0}, {4, 0}, {4, 0}, {0, 0}};
  EXPECT_THROW(score_room(r), DegeneratePolygon);
}

TEST(ScoreRoom, ThinRoomFailsDefaultThresholds) {
  LayoutThresholds t;
  EXPECT_FALSE(passes_thresholds(rect_room(6, 1), t));
  EXPECT_TRUE(passes_thresholds(rect_room(5, 3), t));
}

TEST(ScoreRoom, AgreesWithExactGridArea) {
  Rng rng(3, "plans");
  for (int i = 0; i < 50; ++i) {
    const LayoutSpec s = fixtures::random_spec(rng);
    const FloorPlan p = generate_floorplan(s, fixtures::catalog(), static_cast<std::uint64_t>(i));
    for (const Room* r : p.all_rooms()) {
      const auto exact = oracle::room_shape(*r, s.grid_resolution);
      const RoomScore got = score_room(*r);
      EXPECT_NEAR(got.fill_ratio, exact.fill, 1e-9 * exact.fill);
      EXPECT_NEAR(got.aspect_ratio, exact.aspect, 1e-9 * exact.aspect);
    }
  }
}

TEST(ExpandLShape, StripMakesRectangle) {
  LayoutDraft d(16, 12, 0.25, 0);
  d.room_types = {RoomType::kBedroom};
  for (int j = 0; j < 12; ++j) {
    for (int i = 0; i < 12; ++i) d.set(i, j, 0);
  }
  const Room r = expand_l_shape(d, "f0_r00", CellRect{12, 0, 16, 12});
  const RoomScore s = score_room(r);
  EXPECT_DOUBLE_EQ(s.fill_ratio, 1.0);
  EXPECT_NEAR(polygon_area(r.polygon), 12.0, 1e-12);
}

TEST(ExpandLShape, RejectedWhenFillWouldDrop) {
  LayoutDraft d(16, 16, 0.25, 0);
  d.room_types = {RoomType::kKitchen};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 8; ++i) d.set(i, j, 0);
  }
  const Room r = expand_l_shape(d, "f0_r00", CellRect{0, 4, 4, 16});
  EXPECT_NEAR(polygon_area(r.polygon), 2.0, 1e-12);
  EXPECT_EQ(d.at(1, 8), LayoutDraft::kUnusable);
}

TEST(ExpandLShape, NonAdjacentRegionThrows) {
  LayoutDraft d(16, 16, 0.25, 0);
  d.room_types = {RoomType::kKitchen};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) d.set(i, j, 0);
  }
  EXPECT_THROW(expand_l_shape(d, "f0_r00", CellRect{10, 10, 14, 14}), NotAdjacent);
}

TEST(GenerateFloorplan, ThreeRoomApartmentIsConnected) {
  const FloorPlan p = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 42);
  EXPECT_EQ(p.all_rooms().size(), 3u);
  EXPECT_TRUE(oracle::connected(p));
  EXPECT_TRUE(check_connectivity(p));
}

TEST(GenerateFloorplan, SingleBedroomHasOneExteriorDoor) {
  const FloorPlan p = generate_floorplan(fixtures::spec({RoomType::kBedroom}, 5, 4), fixtures::catalog(), 1);
  ASSERT_EQ(p.floors.size(), 1u);
  ASSERT_EQ(p.floors[0].rooms.size(), 1u);
  int interior = 0;
  int exterior = 0;
  for (const auto& o : p.floors[0].openings) (o.kind == OpeningKind::kDoor ? interior : exterior)++;
  EXPECT_EQ(interior, 0);
  EXPECT_EQ(exterior, 1);
}

TEST(GenerateFloorplan, TwoFloorsShareAStaircase) {
  const LayoutSpec s = fixtures::spec({RoomType::kLivingRoom, RoomType::kBedroom}, 7, 6, 2);
  const FloorPlan p = generate_floorplan(s, fixtures::catalog(), 5);
  ASSERT_EQ(p.floors.size(), 2u);
  ASSERT_EQ(p.staircases.size(), 1u);
  const Staircase& st = p.staircases[0];
  EXPECT_EQ(st.lower_floor, 0);
  EXPECT_EQ(st.upper_floor, 1);
  ASSERT_EQ(p.floors[0].ceiling_cutouts.size(), 1u);
  EXPECT_EQ(p.floors[0].ceiling_cutouts[0], st.footprint);
  const auto fp = oracle::points(scene_json::rect_polygon(st.footprint));
  for (const auto* room_id : {&st.lower_room, &st.upper_room}) {
    const Room* r = p.find_room(*room_id);
    ASSERT_NE(r, nullptr);
    const auto inner = oracle::points(r->interior);
    for (const auto& q : fp) {
      EXPECT_TRUE(oracle::inside(inner, q) || boundary_distance(inner, q) <= 1e-9) << *room_id;
    }
  }
  EXPECT_TRUE(oracle::connected(p));
}

TEST(GenerateFloorplan, DeterministicPerSeed) {
  const auto a = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 9);
  const auto b = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 9);
  EXPECT_EQ(canonical_dump(scene_json::to_json(a)), canonical_dump(scene_json::to_json(b)));
  const auto c = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 10);
  EXPECT_NE(canonical_dump(scene_json::to_json(a)), canonical_dump(scene_json::to_json(c)));
}

TEST(GenerateFloorplan, InvalidSpecsRejected) {
  LayoutSpec s = fixtures::apartment();
  s.width = 3.5;
  EXPECT_THROW(generate_floorplan(s, fixtures::catalog(), 1), InvalidSpec);
  s = fixtures::apartment();
  s.grid_resolution = 0.3;
  EXPECT_THROW(generate_floorplan(s, fixtures::catalog(), 1), InvalidSpec);
  s = fixtures::apartment();
  s.floors = 0;
  EXPECT_THROW(generate_floorplan(s, fixtures::catalog(), 1), InvalidSpec);
}

TEST(GenerateFloorplan, ImpossibleThresholdsExhaustBudget) {
  LayoutSpec s = fixtures::apartment();
  s.thresholds.min_room_area[RoomType::kLivingRoom] = 200.0;
  s.proposal_budget = 20;
  try {
    generate_floorplan(s, fixtures::catalog(), 1);
    FAIL() << "expected GenerationExhausted";
  } catch (const GenerationExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("20"), std::string::npos) << e.what();
  }
}

TEST(GenerateFloorplan, PlanCheckRejectsUntilAccepted) {
  int calls = 0;
  const FloorPlan p = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 42, [&](const FloorPlan&) {
    return ++calls < 3 ? std::string("not yet") : std::string();
  });
  EXPECT_EQ(calls, 3);
  EXPECT_GE(p.rejected_proposals, 2);
  LayoutSpec s = fixtures::apartment();
  s.proposal_budget = 5;
  try {
    generate_floorplan(s, fixtures::catalog(), 42, [](const FloorPlan&) { return std::string("never"); });
    FAIL() << "expected GenerationExhausted";
  } catch (const GenerationExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("never"), std::string::npos) << e.what();
  }
}

TEST(CheckConnectivity, DetectsIsolatedRoom) {
  FloorPlan p = generate_floorplan(fixtures::apartment(), fixtures::catalog(), 42);
  EXPECT_TRUE(check_connectivity(p));
  auto& ops = p.floors[0].openings;
  const std::string victim = p.floors[0].rooms.back().room_id;
  ops.erase(std::remove_if(ops.begin(), ops.end(),
                           [&](const Opening& o) {
                             return o.kind == OpeningKind::kDoor && (o.room_a == victim || o.room_b == victim);
                           }),
            ops.end());
  EXPECT_FALSE(check_connectivity(p));
  EXPECT_FALSE(oracle::connected(p));
}

TEST(GenerateFloorplan, RandomPlansPassOracles) {
  Rng rng(17, "specs");
  for (int i = 0; i < 150; ++i) {
    const LayoutSpec s = fixtures::random_spec(rng);
    const FloorPlan p = generate_floorplan(s, fixtures::catalog(), static_cast<std::uint64_t>(1000 + i));
    EXPECT_LE(oracle::room_overlap(p), 1e-9) << i;
    EXPECT_TRUE(oracle::connected(p)) << i;
    EXPECT_EQ(check_connectivity(p), oracle::connected(p)) << i;
    for (const Room* r : p.all_rooms()) EXPECT_TRUE(oracle::within_thresholds(*r, s)) << r->room_id;
    EXPECT_EQ(static_cast<int>(p.staircases.size()), s.floors - 1);
  }
}

TEST(GenerateFloorplan, WallsAndInteriorsTileTheRooms) {
  // Every point of a room's centre-line outline lies in its interior or
  // within half a wall thickness of it.
  Rng rng(23, "specs");
  for (int i = 0; i < 30; ++i) {
    const LayoutSpec s = fixtures::random_spec(rng);
    const FloorPlan p = generate_floorplan(s, fixtures::catalog(), static_cast<std::uint64_t>(i));
    const double half = 0.5 * std::max(s.interior_wall_thickness, s.exterior_wall_thickness) + 1e-9;
    for (const Room* r : p.all_rooms()) {
      const auto outline = oracle::points(r->polygon);
      const auto inner = oracle::points(r->interior);
      const auto box = oracle::bbox(outline);
      const double step = 0.5 * s.grid_resolution;
      for (double x = box.x0 + 0.5 * step; x < box.x1; x += step) {
        for (double y = box.y0 + 0.5 * step; y < box.y1; y += step) {
          if (!oracle::inside(outline, {x, y})) continue;
          if (oracle::inside(inner, {x, y})) continue;
          EXPECT_LE(boundary_distance(inner, {x, y}), half) << r->room_id << " at " << x << "," << y;
        }
      }
    }
    for (const auto& f : p.floors) {
      for (const auto& w : f.walls) {
        EXPECT_GT(w.thickness, 0.0);
        EXPECT_TRUE(std::abs(w.a.x - w.b.x) < 1e-12 || std::abs(w.a.y - w.b.y) < 1e-12) << w.wall_id;
      }
      for (const auto& o : f.openings) {
        const WallSegment* w = p.find_wall(o.wall_id);
        ASSERT_NE(w, nullptr);
        EXPECT_LT(o.width, w->length());
        EXPECT_NE(o.room_a, o.room_b);
      }
    }
  }
}
