// scenesmith: generate, validate, preview, lint and build task manifests
// for procedurally generated indoor scenes.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenesmith/scenesmith.hpp"

namespace {

using namespace scenesmith;

struct RunFlags {
  std::string config;
  std::string catalog;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool dr = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Run config (JSON); defaults to the built-in config");
  cmd->add_option("--catalog", f.catalog, "Asset catalog; defaults to $SCENESMITH_CATALOG");
  cmd->add_option("--out", f.out, "Scene corpus directory");
  cmd->add_option("--seed", f.seed, "Master seed");
}

// Flags override the config file, which overrides the built-in defaults.
RunConfig resolve(const RunFlags& f) {
  RunConfig c = f.config.empty() ? default_run_config() : config_json::load_run_config(f.config);
  if (!f.catalog.empty()) c.catalog = f.catalog;
  if (!f.out.empty()) c.out = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.dr) c.dr = true;
  return c;
}

std::optional<TaskCounts> parse_counts(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    std::size_t a_end = 0;
    std::size_t b_end = 0;
    const std::string a = s.substr(0, comma);
    const std::string b = s.substr(comma + 1);
    TaskCounts c{std::stoi(a, &a_end), std::stoi(b, &b_end)};
    if (a_end != a.size() || b_end != b.size()) return std::nullopt;
    return c;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural indoor scene generation"};
  app.require_subcommand(1);

  RunFlags gen;
  auto* generate = app.add_subcommand("generate", "Generate the scene corpus and its index");
  add_run_flags(generate, gen);
  generate->add_option("--jobs", gen.jobs, "Worker threads");
  generate->add_flag("--dr", gen.dr, "Domain-randomized materials and lighting");

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Validate scene files or directories");
  validate->add_option("paths", validate_paths, "Scene files or directories");

  std::string preview_scene;
  int preview_floor = 0;
  std::string preview_out;
  auto* preview = app.add_subcommand("preview", "Render one floor of a scene as SVG");
  preview->add_option("scene", preview_scene, "Scene file")->required();
  preview->add_option("--floor", preview_floor, "Floor index");
  preview->add_option("--out", preview_out, "SVG output path (default <scene>.floor<N>.svg)");

  RunFlags man;
  std::string templates;
  std::string counts_all;
  std::string embodiment;
  bool vary_scenes = false;
  std::string manifest_out;
  auto* manifest = app.add_subcommand("manifest", "Build an episode manifest over the corpus");
  add_run_flags(manifest, man);
  manifest->add_option("--templates", templates, "Task template file");
  manifest->add_option("--counts", counts_all, "Override every template's counts as N_ASSETS,N_SEQUENCES");
  manifest->add_option("--embodiment", embodiment, "Robot embodiment tag");
  manifest->add_flag("--vary-scenes", vary_scenes, "Spread each asset's sequences over several scenes");
  manifest->add_option("--manifest-out", manifest_out, "Manifest path (default <out>/manifest.json)");

  std::string lint_catalog_path;
  auto* lint = app.add_subcommand("lint", "Report catalog coverage warnings");
  lint->add_option("catalog", lint_catalog_path, "Asset catalog; defaults to $SCENESMITH_CATALOG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(resolve(gen), std::cout, std::cerr);
    if (*validate) return cmd_validate(validate_paths, std::cout, std::cerr);
    if (*preview) {
      if (preview_out.empty()) preview_out = preview_scene + ".floor" + std::to_string(preview_floor) + ".svg";
      return cmd_preview(preview_scene, preview_floor, preview_out, std::cout, std::cerr);
    }
    if (*manifest) {
      RunConfig c = resolve(man);
      if (!templates.empty()) c.manifest.templates = templates;
      if (!embodiment.empty()) c.manifest.embodiment = embodiment;
      if (vary_scenes) c.manifest.vary_scenes = true;
      if (!counts_all.empty()) {
        auto n = parse_counts(counts_all);
        if (!n) {
          std::cerr << "error: --counts expects N_ASSETS,N_SEQUENCES\n";
          return kExitUsage;
        }
        c.manifest.counts_all = n;
        c.manifest.counts.clear();
      }
      return cmd_manifest(c, manifest_out, std::cout, std::cerr);
    }
    if (*lint) return cmd_lint(lint_catalog_path, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
