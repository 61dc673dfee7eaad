// Generate a small corpus in memory and batch task episodes over it.
//
//   demo_task_manifest [n_assets] [n_sequences]

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "scenesmith/scenesmith.hpp"

using namespace scenesmith;

int main(int argc, char** argv) {
  const TaskCounts counts{argc > 1 ? std::stoi(argv[1]) : 2, argc > 2 ? std::stoi(argv[2]) : 3};
  const Catalog catalog = load_catalog(SCENESMITH_SOURCE_DIR "/data/sample_catalog.json");
  const auto templates = load_task_templates(SCENESMITH_SOURCE_DIR "/data/task_templates.json");

  // Two scenes per family, each on its own layout.
  std::vector<SceneDocument> scenes;
  for (RoomType t : kRoomTypes) {
    for (int k = 0; k < 2; ++k) {
      const std::string key = scene_key(t, k, 0);
      scenes.push_back(generate_scene(preset_layout(t), catalog, derive_seed(1, "layout/" + key),
                                      derive_seed(1, "variant/" + key), {}, key));
    }
  }

  // One instance in full: bindings, goal and instruction.
  for (const SceneDocument& doc : scenes) {
    try {
      const TaskInstance one = instantiate_task(doc, templates.front(), catalog, 1);
      std::cout << templates.front().template_id << " in " << doc.generation.scene_key << ": \""
                << one.language_instruction << "\"\n";
      for (const auto& [role, id] : one.bindings) std::cout << "  " << role << " -> " << id << "\n";
      for (const auto& g : one.goal) std::cout << "  goal " << task_json::to_json(g).dump() << "\n";
      std::cout << "\n";
      break;
    } catch (const Error& e) {
      std::cout << templates.front().template_id << " in " << doc.generation.scene_key << ": " << e.what() << "\n";
    }
  }

  std::map<std::string, TaskCounts> per_template;
  for (const auto& t : templates) per_template[t.template_id] = counts;
  const EpisodeManifest m = batch_manifest(templates, scenes, catalog, per_template, 1);
  for (const auto& b : m.batches) {
    std::cout << b.template_id << "  " << b.instances.size() << " instances over " << b.primary_assets.size()
              << " assets\n";
  }
  std::cout << "total " << m.total_instances() << " instances, manifest " << serialize_manifest(m).size()
            << " bytes\n";
  return 0;
}
