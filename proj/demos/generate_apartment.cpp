// Generate one furnished three-room apartment, save it as a scene file and
// render its floor plan.
//
//   demo_generate_apartment [seed] [out_dir]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "scenesmith/scenesmith.hpp"

using namespace scenesmith;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;
  const std::filesystem::path out = argc > 2 ? argv[2] : "apartment_out";
  std::filesystem::create_directories(out);

  const Catalog catalog = load_catalog(SCENESMITH_SOURCE_DIR "/data/sample_catalog.json");

  LayoutSpec spec;
  spec.rooms_requested = {RoomType::kLivingRoom, RoomType::kKitchen, RoomType::kBedroom};
  spec.width = 12.0;
  spec.depth = 10.0;

  // Same layout seed, two variant seeds: one floor plan, two furnishings.
  for (std::uint64_t variant = 0; variant < 2; ++variant) {
    const SceneDocument doc = generate_scene(spec, catalog, seed, derive_seed(seed, "variant/" + std::to_string(variant)),
                                             {}, "apartment_" + std::to_string(variant));
    const std::string bytes = serialize_scene(doc);
    const auto scene_path = out / ("apartment_" + std::to_string(variant) + ".json");
    std::ofstream(scene_path, std::ios::binary) << bytes;
    std::ofstream(out / ("apartment_" + std::to_string(variant) + ".svg")) << render_floorplan_svg(doc, 0);

    const SceneStats s = scene_stats(doc);
    std::cout << scene_path.string() << "\n"
              << "  hash   " << doc.content_hash << "\n"
              << "  rooms  " << s.room_count << ", assets " << s.asset_count << ", joints " << s.joint_count
              << ", lights " << s.light_count << "\n";
    for (const auto& [room, area] : s.room_areas) std::cout << "  " << room << "  " << area << " m2\n";

    const ValidationReport r = validate_scene(bytes);
    std::cout << "  validate: " << (r.ok() ? "ok" : "errors") << " (" << r.warnings.size() << " warnings)\n";
    if (!r.ok()) return 1;
  }
  return 0;
}
