#pragma once

// Shared inputs for the unit tests: repository data files and a small
// generated corpus.

#include <string>
#include <string_view>
#include <vector>

#include "scenesmith/scenesmith.hpp"

#ifndef SCENESMITH_SOURCE_DIR
#define SCENESMITH_SOURCE_DIR "."
#endif

namespace fixtures {

inline std::string data_path(std::string_view name) {
  return std::string(SCENESMITH_SOURCE_DIR) + "/data/" + std::string(name);
}

inline const scenesmith::Catalog& catalog() {
  static const scenesmith::Catalog c = scenesmith::load_catalog(data_path("sample_catalog.json"));
  return c;
}

inline scenesmith::Json catalog_json() {
  return scenesmith::parse_json_text(scenesmith::read_file(data_path("sample_catalog.json")), "catalog");
}

inline const std::vector<scenesmith::TaskTemplate>& templates() {
  static const auto t = scenesmith::load_task_templates(data_path("task_templates.json"));
  return t;
}

inline scenesmith::LayoutSpec spec(std::vector<scenesmith::RoomType> rooms, double w, double d, int floors = 1) {
  scenesmith::LayoutSpec s;
  s.rooms_requested = std::move(rooms);
  s.width = w;
  s.depth = d;
  s.floors = floors;
  return s;
}

inline scenesmith::LayoutSpec apartment() {
  using scenesmith::RoomType;
  return spec({RoomType::kLivingRoom, RoomType::kKitchen, RoomType::kBedroom}, 12.0, 10.0);
}

// A feasible random layout request: 1 to 4 rooms over 1 or 2 floors on a
// footprint sized to the requested rooms.
inline scenesmith::LayoutSpec random_spec(scenesmith::Rng& rng) {
  using scenesmith::RoomType;
  scenesmith::LayoutSpec s;
  const int floors = rng.bernoulli(0.2) ? 2 : 1;
  const int n = static_cast<int>(rng.uniform_int(floors, 4));
  for (int k = 0; k < n; ++k) s.rooms_requested.push_back(scenesmith::kRoomTypes[rng.index(3)]);
  s.floors = floors;
  const double per_floor = static_cast<double>((n + floors - 1) / floors);
  s.width = 0.5 * static_cast<double>(rng.uniform_int(12, 16) + static_cast<std::int64_t>(6 * per_floor));
  s.depth = 0.5 * static_cast<double>(rng.uniform_int(12, 14) + static_cast<std::int64_t>(2 * per_floor));
  return s;
}

// Two scenes per room-type preset, generated once per test binary.
inline const std::vector<scenesmith::SceneDocument>& corpus() {
  static const std::vector<scenesmith::SceneDocument> docs = [] {
    std::vector<scenesmith::SceneDocument> out;
    for (scenesmith::RoomType t : scenesmith::kRoomTypes) {
      for (std::uint64_t k = 0; k < 2; ++k) {
        out.push_back(scenesmith::generate_scene(scenesmith::preset_layout(t), catalog(), 100 + k, 200 + k));
      }
    }
    return out;
  }();
  return docs;
}

}  // namespace fixtures
