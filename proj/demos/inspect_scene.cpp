// Load a scene file, validate it and print what it contains.
//
//   demo_inspect_scene <scene.json>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "scenesmith/scenesmith.hpp"

using namespace scenesmith;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <scene.json>\n";
    return 2;
  }
  std::ifstream in(argv[1], std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  const ValidationReport report = validate_scene(bytes);
  for (const auto& e : report.errors) std::cout << "error   [" << e.code << "] " << e.path << ": " << e.message << "\n";
  for (const auto& w : report.warnings) std::cout << "warning [" << w.code << "] " << w.path << ": " << w.message << "\n";
  if (report.has_error("PARSE")) return 1;

  const SceneDocument doc = parse_scene(bytes);
  std::cout << "scene " << doc.generation.scene_key << "  seed " << doc.generation.seed << "  layout seed "
            << doc.generation.layout_seed << "\n";

  std::map<std::string, std::map<std::string, int>> per_room;
  for (const auto& p : doc.scene.placed) {
    const AssetRecord* a = doc.catalog_subset.find(p.asset_id);
    per_room[p.room_id][a ? a->object_class : p.asset_id]++;
  }
  for (const Room* r : doc.scene.plan.all_rooms()) {
    std::cout << r->room_id << " (" << to_string(r->room_type) << ", " << polygon_area(r->polygon) << " m2)\n";
    for (const auto& [cls, n] : per_room[r->room_id]) std::cout << "  " << n << " x " << cls << "\n";
  }

  std::cout << "joints\n";
  for (const auto& j : doc.joints) {
    std::cout << "  " << j.instance_id << "/" << j.part_id << "  " << to_string(j.joint_type) << "  [" << j.lower
              << ", " << j.upper << "]\n";
  }
  std::cout << "lights\n";
  for (const auto& l : doc.lights) {
    std::cout << "  " << l.light_id << "  " << to_string(l.kind) << "  " << l.intensity << " lux  "
              << l.color_temperature << " K\n";
  }
  const SceneStats s = scene_stats(doc);
  std::cout << "friction means\n";
  for (const auto& [mc, mean] : s.friction_means) {
    std::cout << "  " << to_string(mc) << "  " << mean << " over " << s.friction_counts.at(mc) << "\n";
  }
  return report.ok() ? 0 : 1;
}
