#pragma once

// Batch commands behind the command-line front-end: corpus generation,
// validation, preview rendering, episode manifests and catalog linting.
// Each command returns a process exit status and reports to the given streams.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/json_util.hpp"
#include "scenesmith/pipeline.hpp"
#include "scenesmith/rng.hpp"
#include "scenesmith/scenefile.hpp"
#include "scenesmith/taskgen.hpp"

namespace scenesmith {

namespace fs = std::filesystem;

inline constexpr std::string_view kConfigSchema = "agentworld-config/1";
inline constexpr std::string_view kIndexSchema = "agentworld-index/1";
inline constexpr std::string_view kCatalogEnv = "SCENESMITH_CATALOG";
inline constexpr std::string_view kSceneSuffix = ".scene.json";

// Exit statuses shared by the commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitErrors = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailures = 3;

// One scene family: a layout preset, the number of base layouts and the
// number of furnishing variants drawn per base layout.
struct SceneTypeConfig {
  RoomType room_type = RoomType::kLivingRoom;
  LayoutSpec layout;
  int base_layouts = 10;
  int variants = 5;

  bool operator==(const SceneTypeConfig&) const = default;
};

struct ManifestConfig {
  std::string templates;  // empty: no template file configured
  std::string embodiment = "unitree_g1";
  bool vary_scenes = false;
  std::map<std::string, TaskCounts> counts;  // per-template overrides
  std::optional<TaskCounts> counts_all;      // applies to every template

  bool operator==(const ManifestConfig&) const = default;
};

struct RunConfig {
  std::string catalog;  // empty: fall back to the environment
  std::string out = "scenes";
  std::vector<SceneTypeConfig> types;
  std::uint64_t seed = 7;
  int jobs = 1;
  bool dr = false;
  std::map<RoomType, std::vector<std::string>> interactables = default_interactables();
  int furnish_attempts = 5;
  ManifestConfig manifest;

  bool operator==(const RunConfig&) const = default;
};

// Layout presets per scene family.
inline LayoutSpec preset_layout(RoomType type) {
  LayoutSpec s;
  switch (type) {
    case RoomType::kLivingRoom:
      s.rooms_requested = {RoomType::kLivingRoom, RoomType::kKitchen};
      s.width = 10.0;
      s.depth = 7.0;
      break;
    case RoomType::kKitchen:
      s.rooms_requested = {RoomType::kKitchen, RoomType::kLivingRoom, RoomType::kBedroom};
      s.width = 12.0;
      s.depth = 10.0;
      break;
    case RoomType::kBedroom:
      s.rooms_requested = {RoomType::kBedroom, RoomType::kLivingRoom};
      s.floors = 2;
      s.width = 7.0;
      s.depth = 6.0;
      break;
    case RoomType::kAny:
      throw InvalidSpec("no layout preset for room type 'any'");
  }
  return s;
}

inline RunConfig default_run_config() {
  RunConfig c;
  for (RoomType t : kRoomTypes) c.types.push_back({t, preset_layout(t), 10, 5});
  return c;
}

inline void check_run_config(const RunConfig& c) {
  if (c.types.empty()) throw InvalidSpec("config lists no scene types");
  std::set<RoomType> seen;
  for (const auto& t : c.types) {
    const std::string name(to_string(t.room_type));
    if (!seen.insert(t.room_type).second) throw InvalidSpec("scene type '" + name + "' listed twice");
    if (t.base_layouts < 1 || t.variants < 1) {
      throw InvalidSpec("scene type '" + name + "': counts must be positive");
    }
    if (t.base_layouts > 99 || t.variants > 99) {
      throw InvalidSpec("scene type '" + name + "': at most 99 base layouts and 99 variants");
    }
    validate_spec(t.layout);
  }
  if (c.jobs < 1) throw InvalidSpec("jobs must be >= 1");
  if (c.furnish_attempts < 1) throw InvalidSpec("furnish_attempts must be >= 1");
  if (c.out.empty()) throw InvalidSpec("output directory must be set");
  for (const auto& [tid, counts] : c.manifest.counts) {
    if (counts.n_assets < 1 || counts.n_sequences < 1) {
      throw InvalidSpec("manifest counts for '" + tid + "' must be positive");
    }
  }
  if (c.manifest.counts_all && (c.manifest.counts_all->n_assets < 1 || c.manifest.counts_all->n_sequences < 1)) {
    throw InvalidSpec("manifest counts must be positive");
  }
}

// ---------------------------------------------------------------------------
// Config documents

namespace config_json {

inline TaskCounts counts_from(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError(ctx + " must be [n_assets, n_sequences]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

inline Json to_json(const TaskCounts& c) { return Json::array({c.n_assets, c.n_sequences}); }

inline Json to_json(const RunConfig& c) {
  Json types = Json::object();
  for (const auto& t : c.types) {
    types[std::string(to_string(t.room_type))] = {{"base_layouts", t.base_layouts},
                                                  {"variants", t.variants},
                                                  {"layout", scene_json::to_json(t.layout)}};
  }
  Json inter = Json::object();
  for (const auto& [room, list] : c.interactables) inter[std::string(to_string(room))] = list;
  Json counts = Json::object();
  for (const auto& [tid, n] : c.manifest.counts) counts[tid] = to_json(n);
  Json manifest = {{"embodiment", c.manifest.embodiment},
                   {"vary_scenes", c.manifest.vary_scenes},
                   {"counts", counts}};
  if (!c.manifest.templates.empty()) manifest["templates"] = c.manifest.templates;
  if (c.manifest.counts_all) manifest["counts_all"] = to_json(*c.manifest.counts_all);
  Json j = {{"schema_version", kConfigSchema},
            {"out", c.out},
            {"seed", c.seed},
            {"jobs", c.jobs},
            {"dr", c.dr},
            {"scene_types", types},
            {"interactables", inter},
            {"furnish_attempts", c.furnish_attempts},
            {"manifest", manifest}};
  if (!c.catalog.empty()) j["catalog"] = c.catalog;
  return j;
}

// Every key is optional; absent keys keep the defaults. A scene type's
// "layout" object is merged over the preset for that type.
inline void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ParseError(ctx + ": unknown key '" + it.key() + "'");
  }
}

// Every key of a layout patch must exist in the full layout document.
inline void check_layout_patch(const Json& patch, const Json& base, const std::string& ctx) {
  if (!patch.is_object()) throw ParseError(ctx + " must be an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (!base.contains(it.key())) throw ParseError(ctx + ": unknown key '" + it.key() + "'");
    const Json& b = base[it.key()];
    if (b.is_object() && it.key() != "min_room_area") check_layout_patch(it.value(), b, ctx + "." + it.key());
  }
}

inline RunConfig run_config_from(const Json& j) {
  const std::string ctx = "config";
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  if (j.contains("schema_version") && get_string(j, "schema_version", ctx) != kConfigSchema) {
    throw ParseError("config: unsupported schema_version '" + j["schema_version"].dump() + "'");
  }
  static const std::set<std::string> known = {"schema_version", "catalog", "out", "seed", "jobs", "dr",
                                              "scene_types", "interactables", "furnish_attempts",
                                              "manifest"};
  reject_unknown(j, known, ctx);
  RunConfig c = default_run_config();
  if (j.contains("catalog")) c.catalog = get_string(j, "catalog", ctx);
  if (j.contains("out")) c.out = get_string(j, "out", ctx);
  if (j.contains("seed")) c.seed = get_u64(j, "seed", ctx);
  if (j.contains("jobs")) c.jobs = static_cast<int>(get_int(j, "jobs", ctx));
  if (j.contains("dr")) c.dr = get_bool(j, "dr", ctx);
  if (j.contains("furnish_attempts")) c.furnish_attempts = static_cast<int>(get_int(j, "furnish_attempts", ctx));
  if (j.contains("scene_types")) {
    const Json& types = j["scene_types"];
    if (!types.is_object()) throw ParseError("config.scene_types must be an object");
    c.types.clear();
    for (auto it = types.begin(); it != types.end(); ++it) {
      const std::string tctx = "config.scene_types." + it.key();
      auto rt = parse_enum<RoomType>(it.key());
      if (!rt || *rt == RoomType::kAny) throw ParseError(tctx + ": unknown room type");
      const Json& v = it.value();
      if (!v.is_object()) throw ParseError(tctx + " must be an object");
      reject_unknown(v, {"base_layouts", "variants", "layout"}, tctx);
      SceneTypeConfig t{*rt, preset_layout(*rt), 10, 5};
      if (v.contains("base_layouts")) t.base_layouts = static_cast<int>(get_int(v, "base_layouts", tctx));
      if (v.contains("variants")) t.variants = static_cast<int>(get_int(v, "variants", tctx));
      if (v.contains("layout")) {
        Json merged = scene_json::to_json(t.layout);
        check_layout_patch(v["layout"], merged, tctx + ".layout");
        merged.merge_patch(v["layout"]);
        t.layout = scene_json::spec_from(merged, tctx + ".layout");
      }
      c.types.push_back(std::move(t));
    }
    std::sort(c.types.begin(), c.types.end(),
              [](const SceneTypeConfig& a, const SceneTypeConfig& b) { return a.room_type < b.room_type; });
  }
  if (j.contains("interactables")) {
    const Json& inter = j["interactables"];
    if (!inter.is_object()) throw ParseError("config.interactables must be an object");
    c.interactables.clear();
    for (auto it = inter.begin(); it != inter.end(); ++it) {
      auto rt = parse_enum<RoomType>(it.key());
      if (!rt || *rt == RoomType::kAny) throw ParseError("config.interactables: unknown room type '" + it.key() + "'");
      if (!it.value().is_array()) throw ParseError("config.interactables." + it.key() + " must be an array");
      for (const Json& s : it.value()) {
        if (!s.is_string()) throw ParseError("config.interactables." + it.key() + " entries must be strings");
        c.interactables[*rt].push_back(s.get<std::string>());
      }
    }
  }
  if (j.contains("manifest")) {
    const Json& m = j["manifest"];
    const std::string mctx = "config.manifest";
    if (!m.is_object()) throw ParseError(mctx + " must be an object");
    reject_unknown(m, {"templates", "embodiment", "vary_scenes", "counts_all", "counts"}, mctx);
    if (m.contains("templates")) c.manifest.templates = get_string(m, "templates", mctx);
    if (m.contains("embodiment")) c.manifest.embodiment = get_string(m, "embodiment", mctx);
    if (m.contains("vary_scenes")) c.manifest.vary_scenes = get_bool(m, "vary_scenes", mctx);
    if (m.contains("counts_all")) c.manifest.counts_all = counts_from(m["counts_all"], mctx + ".counts_all");
    if (m.contains("counts")) {
      if (!m["counts"].is_object()) throw ParseError(mctx + ".counts must be an object");
      for (auto it = m["counts"].begin(); it != m["counts"].end(); ++it) {
        c.manifest.counts[it.key()] = counts_from(it.value(), mctx + ".counts." + it.key());
      }
    }
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  return run_config_from(parse_json_text(read_file(path), path));
}

}  // namespace config_json

// Catalog path precedence: explicit value, then the environment variable.
inline std::string resolve_catalog_path(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv(std::string(kCatalogEnv).c_str()); env && *env) return env;
  throw InvalidSpec("no catalog given: pass --catalog, set it in the config or set " +
                    std::string(kCatalogEnv));
}

// ---------------------------------------------------------------------------
// Corpus generation

struct SceneJob {
  std::size_t index = 0;
  RoomType room_type = RoomType::kLivingRoom;
  int base = 0;
  int variant = 0;
  std::string key;  // <type>-bNN-vNN
  std::uint64_t layout_seed = 0;
  std::uint64_t variant_seed = 0;
};

inline std::string scene_key(RoomType type, int base, int variant) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-b%02d-v%02d", base, variant);
  return std::string(to_string(type)) + buf;
}

// Seeds depend only on the master seed and the scene's position in the
// corpus, so worker scheduling never changes a scene.
inline std::vector<SceneJob> plan_jobs(const RunConfig& c) {
  std::vector<SceneJob> jobs;
  for (const auto& t : c.types) {
    const std::string type(to_string(t.room_type));
    for (int b = 0; b < t.base_layouts; ++b) {
      const std::string base_path = "scene/" + type + "/base/" + std::to_string(b);
      for (int v = 0; v < t.variants; ++v) {
        SceneJob job;
        job.index = jobs.size();
        job.room_type = t.room_type;
        job.base = b;
        job.variant = v;
        job.key = scene_key(t.room_type, b, v);
        job.layout_seed = derive_seed(c.seed, base_path);
        job.variant_seed = derive_seed(c.seed, base_path + "/variant/" + std::to_string(v));
        jobs.push_back(std::move(job));
      }
    }
  }
  return jobs;
}

inline std::string scene_file_name(const std::string& key, const std::string& content_hash) {
  return key + "-" + content_hash.substr(0, 12) + std::string(kSceneSuffix);
}

struct SceneOutcome {
  std::string file;  // empty on failure
  std::string content_hash;
  bool reused = false;
  double seconds = 0.0;
  std::string error;
};

struct GenerateSummary {
  std::vector<SceneJob> jobs;
  std::vector<SceneOutcome> outcomes;
  std::string inputs_hash;
  std::string index_hash;

  std::size_t generated() const {
    return static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [](const SceneOutcome& o) {
      return !o.file.empty() && !o.reused;
    }));
  }
  std::size_t reused() const {
    return static_cast<std::size_t>(
        std::count_if(outcomes.begin(), outcomes.end(), [](const SceneOutcome& o) { return o.reused; }));
  }
  std::size_t failed() const {
    return static_cast<std::size_t>(
        std::count_if(outcomes.begin(), outcomes.end(), [](const SceneOutcome& o) { return o.file.empty(); }));
  }
  std::vector<double> timings() const {
    std::vector<double> t;
    for (const auto& o : outcomes) {
      if (!o.file.empty() && !o.reused) t.push_back(o.seconds);
    }
    return t;
  }
};

namespace cli_detail {

inline void write_file(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidSpec("cannot write " + tmp.string());
    f << bytes;
    if (!f) throw InvalidSpec("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Existing files for a scene key, in name order.
inline std::vector<fs::path> files_for_key(const fs::path& dir, const std::string& key) {
  std::vector<fs::path> out;
  const std::string prefix = key + "-";
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind(prefix, 0) == 0 && name.size() == prefix.size() + 12 + kSceneSuffix.size() &&
        name.ends_with(kSceneSuffix)) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Fingerprint of the generation inputs a scene file does not record itself.
inline std::string inputs_fingerprint(const RunConfig& c, const Catalog& catalog) {
  Json inter = Json::object();
  for (const auto& [room, list] : c.interactables) inter[std::string(to_string(room))] = list;
  const Json j{{"catalog", to_json(catalog)}, {"interactables", inter}, {"furnish_attempts", c.furnish_attempts}};
  return sha256_hex(canonical_dump(j));
}

// Fingerprint stored in an earlier index.json, if it can be read.
inline std::optional<std::string> previous_fingerprint(const fs::path& dir) {
  try {
    const Json j = parse_json_text(read_file((dir / "index.json").string()), "index.json");
    if (j.is_object() && j.contains("inputs_sha256") && j["inputs_sha256"].is_string()) {
      return j["inputs_sha256"].get<std::string>();
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

// A previous output is reused when its name matches its hash and it was
// generated from the same seeds, profile and layout request.
inline std::optional<std::string> reusable_hash(const fs::path& file, const SceneJob& job, DressProfile profile,
                                                const LayoutSpec& layout) {
  try {
    const SceneDocument doc = parse_scene(read_file(file.string()));
    if (doc.content_hash != compute_content_hash(doc)) return std::nullopt;
    if (file.filename().string() != scene_file_name(job.key, doc.content_hash)) return std::nullopt;
    const auto& g = doc.generation;
    if (g.seed != job.variant_seed || g.layout_seed != job.layout_seed || g.scene_key != job.key ||
        g.profile != profile || g.engine_version != kEngineVersion || !(doc.scene.plan.spec == layout)) {
      return std::nullopt;
    }
    return doc.content_hash;
  } catch (const Error&) {
    return std::nullopt;
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

inline Json index_json(const RunConfig& c, const GenerateSummary& s) {
  Json scenes = Json::array();
  Json failures = Json::array();
  for (std::size_t i = 0; i < s.jobs.size(); ++i) {
    const SceneJob& job = s.jobs[i];
    const SceneOutcome& o = s.outcomes[i];
    if (o.file.empty()) {
      failures.push_back({{"key", job.key}, {"error", o.error}});
      continue;
    }
    scenes.push_back({{"key", job.key},
                      {"room_type", to_string(job.room_type)},
                      {"base", job.base},
                      {"variant", job.variant},
                      {"file", o.file},
                      {"content_hash", o.content_hash},
                      {"layout_seed", job.layout_seed},
                      {"seed", job.variant_seed}});
  }
  return {{"schema_version", kIndexSchema},
          {"engine_version", kEngineVersion},
          {"seed", c.seed},
          {"inputs_sha256", s.inputs_hash},
          {"profile", scene_json::profile_name(c.dr ? DressProfile::kDomainRandomized : DressProfile::kDefault)},
          {"scenes", scenes},
          {"failures", failures}};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace cli_detail

// Generates every scene of the config into c.out and writes index.json.
// Throws on config or catalog errors; per-scene failures are recorded.
inline GenerateSummary generate_corpus(const RunConfig& c, const Catalog& catalog) {
  check_run_config(c);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  GenerateSummary summary;
  summary.jobs = plan_jobs(c);
  summary.outcomes.resize(summary.jobs.size());
  const DressProfile profile = c.dr ? DressProfile::kDomainRandomized : DressProfile::kDefault;
  GenerateOptions options;
  options.profile = profile;
  options.interactables = c.interactables;
  options.furnish_attempts = c.furnish_attempts;
  std::map<RoomType, const LayoutSpec*> layouts;
  for (const auto& t : c.types) layouts[t.room_type] = &t.layout;
  summary.inputs_hash = cli_detail::inputs_fingerprint(c, catalog);
  // Earlier outputs are trusted only if they came from the same inputs.
  const bool may_reuse = cli_detail::previous_fingerprint(dir) == summary.inputs_hash;

  std::atomic<std::size_t> next{0};
  std::mutex fs_mutex;
  auto run_one = [&](const SceneJob& job) {
    SceneOutcome out;
    std::vector<fs::path> existing;
    {
      std::lock_guard<std::mutex> lock(fs_mutex);
      existing = cli_detail::files_for_key(dir, job.key);
    }
    for (const auto& f : existing) {
      if (!may_reuse) break;
      if (auto hash = cli_detail::reusable_hash(f, job, profile, *layouts.at(job.room_type))) {
        out.file = f.filename().string();
        out.content_hash = *hash;
        out.reused = true;
        return out;
      }
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SceneDocument doc =
          generate_scene(*layouts.at(job.room_type), catalog, job.layout_seed, job.variant_seed, options, job.key);
      const std::string bytes = serialize_scene(doc);
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.file = scene_file_name(job.key, doc.content_hash);
      out.content_hash = doc.content_hash;
      std::lock_guard<std::mutex> lock(fs_mutex);
      for (const auto& f : existing) fs::remove(f);
      cli_detail::write_file(dir / out.file, bytes);
    } catch (const Error& e) {
      out.file.clear();
      out.error = e.what();
    }
    return out;
  };
  auto worker = [&] {
    for (std::size_t i = next++; i < summary.jobs.size(); i = next++) {
      summary.outcomes[i] = run_one(summary.jobs[i]);
    }
  };
  const int n = std::min<int>(c.jobs, static_cast<int>(std::max<std::size_t>(summary.jobs.size(), 1)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const std::string index = canonical_dump(cli_detail::index_json(c, summary));
  summary.index_hash = sha256_hex(index);
  cli_detail::write_file(dir / "index.json", index);
  return summary;
}

inline int cmd_generate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const Catalog catalog = load_catalog(resolve_catalog_path(c.catalog));
    const GenerateSummary s = generate_corpus(c, catalog);
    const auto t = s.timings();
    out << "generated " << s.generated() << ", reused " << s.reused() << ", failed " << s.failed() << " of "
        << s.jobs.size() << " scenes in " << c.out << "\n";
    if (!t.empty()) {
      out << "per-scene seconds: min " << *std::min_element(t.begin(), t.end()) << ", median "
          << cli_detail::median(t) << ", max " << *std::max_element(t.begin(), t.end()) << "\n";
    }
    out << "index sha256 " << s.index_hash << "\n";
    if (s.failed() > 0) {
      for (std::size_t i = 0; i < s.jobs.size(); ++i) {
        if (s.outcomes[i].file.empty()) err << "failed " << s.jobs[i].key << ": " << s.outcomes[i].error << "\n";
      }
      return kExitFailures;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// Validation, preview, lint

// Directories expand to the scene files they contain, in name order.
inline std::optional<std::vector<fs::path>> expand_scene_paths(const std::vector<std::string>& paths,
                                                               std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p, ec)) {
        if (e.is_regular_file() && e.path().filename().string().ends_with(kSceneSuffix)) found.push_back(e.path());
      }
      if (ec) {
        err << p << ": unreadable directory\n";
        return std::nullopt;
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p, ec)) {
      files.emplace_back(p);
    } else {
      err << p << ": no such file or directory\n";
      return std::nullopt;
    }
  }
  return files;
}

inline int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  auto files = expand_scene_paths(paths, err);
  if (!files) return kExitUsage;
  std::size_t bad = 0;
  for (const auto& f : *files) {
    std::string bytes;
    try {
      bytes = read_file(f.string());
    } catch (const Error& e) {
      err << f.string() << ": " << e.what() << "\n";
      return kExitUsage;
    }
    const ValidationReport r = validate_scene(bytes);
    if (r.ok()) {
      out << f.string() << ": ok\n";
      continue;
    }
    ++bad;
    out << f.string() << ": " << r.errors.size() << " error(s)\n";
    for (const auto& e : r.errors) out << "  [" << e.code << "] " << e.path << ": " << e.message << "\n";
  }
  out << files->size() << " files, " << bad << " with errors\n";
  return bad ? kExitErrors : kExitOk;
}

inline int cmd_preview(const std::string& scene_path, int floor, const std::string& out_path, std::ostream& out,
                       std::ostream& err) {
  try {
    const std::string bytes = read_file(scene_path);
    const ValidationReport r = validate_scene(bytes);
    if (!r.ok()) {
      err << scene_path << ": invalid scene (" << r.errors.front().code << ": " << r.errors.front().message << ")\n";
      return kExitUsage;
    }
    const std::string svg = render_floorplan_svg(parse_scene(bytes), floor);
    cli_detail::write_file(out_path, svg);
    out << "wrote " << out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

inline int cmd_lint(const std::string& catalog_path, std::ostream& out, std::ostream& err) {
  try {
    const LintReport r = lint_catalog(load_catalog(resolve_catalog_path(catalog_path)));
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    out << r.warnings.size() << " warning(s)\n";
    return r.clean() ? kExitOk : kExitErrors;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// Episode manifests

// Scenes listed in <out>/index.json, in index order.
inline std::vector<SceneDocument> load_corpus(const std::string& dir) {
  const fs::path root(dir);
  const Json index = parse_json_text(read_file((root / "index.json").string()), "index.json");
  if (get_string(index, "schema_version", "index") != kIndexSchema) {
    throw ParseError("index.json: unsupported schema_version");
  }
  std::vector<SceneDocument> scenes;
  for (const Json& e : get_array(index, "scenes", "index")) {
    const std::string file = get_string(e, "file", "index.scenes");
    SceneDocument doc = parse_scene(read_file((root / file).string()));
    if (doc.content_hash != get_string(e, "content_hash", "index.scenes")) {
      throw ParseError(file + ": content hash does not match index.json");
    }
    scenes.push_back(std::move(doc));
  }
  return scenes;
}

inline std::map<std::string, TaskCounts> manifest_counts(const ManifestConfig& m,
                                                         const std::vector<TaskTemplate>& templates) {
  std::map<std::string, TaskCounts> counts;
  for (const auto& t : templates) {
    if (m.counts_all) counts[t.template_id] = *m.counts_all;
  }
  for (const auto& [tid, n] : m.counts) {
    if (std::none_of(templates.begin(), templates.end(), [&](const TaskTemplate& t) { return t.template_id == tid; })) {
      throw InvalidSpec("manifest counts name unknown template '" + tid + "'");
    }
    counts[tid] = n;
  }
  return counts;
}

// Writes the manifest for the corpus in c.out to out_path (default
// <out>/manifest.json).
inline int cmd_manifest(const RunConfig& c, const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<TaskTemplate> templates;
  Catalog catalog;
  std::vector<SceneDocument> scenes;
  try {
    check_run_config(c);
    if (c.manifest.templates.empty()) throw InvalidSpec("no task template file given");
    templates = load_task_templates(c.manifest.templates);
    catalog = load_catalog(resolve_catalog_path(c.catalog));
    scenes = load_corpus(c.out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    BatchOptions options;
    options.embodiment = c.manifest.embodiment;
    options.vary_scenes = c.manifest.vary_scenes;
    const EpisodeManifest m = batch_manifest(templates, scenes, catalog, manifest_counts(c.manifest, templates),
                                             c.seed, options);
    const std::string path = out_path.empty() ? (fs::path(c.out) / "manifest.json").string() : out_path;
    const std::string bytes = serialize_manifest(m);
    cli_detail::write_file(path, bytes);
    for (const auto& b : m.batches) {
      out << b.template_id << ": " << b.counts.n_assets << " x " << b.counts.n_sequences << " = "
          << b.instances.size() << "\n";
    }
    out << "total " << m.total_instances() << " instances over " << m.scenes.size() << " scenes; wrote " << path
        << " (sha256 " << sha256_hex(bytes) << ")\n";
    return kExitOk;
  } catch (const InsufficientAssets& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailures;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace scenesmith
