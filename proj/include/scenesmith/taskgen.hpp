#pragma once

// Household task templates bound to concrete scenes, and batch episode
// manifests built from them.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scenesmith/catalog.hpp"
#include "scenesmith/errors.hpp"
#include "scenesmith/furnish.hpp"
#include "scenesmith/json_util.hpp"
#include "scenesmith/physicalize.hpp"
#include "scenesmith/rng.hpp"
#include "scenesmith/scenefile.hpp"

namespace scenesmith {

inline constexpr std::string_view kTaskSchema = "agentworld-tasks/1";
inline constexpr std::string_view kManifestSchema = "agentworld-manifest/1";

inline const std::vector<std::string>& known_embodiments() {
  static const std::vector<std::string> tags = {"unitree_g1", "unitree_h1", "franka_panda_wheeled",
                                                "dobot_x_trainer"};
  return tags;
}

// Relative tolerance of joint_at goals, as a fraction of the joint travel.
inline constexpr double kJointGoalTolerance = 0.1;
// Room doors are modelled as a single revolute leaf opening to 90 degrees.
inline constexpr double kRoomDoorOpenAngle = kPi / 2.0;
inline constexpr std::string_view kRoomDoorPart = "leaf";
inline constexpr int kPlacementCandidates = 5;

struct RoleFilter {
  std::set<std::string> object_class;
  std::set<Subtype> subtype;
  std::optional<PlacementTag> tag;
  std::optional<JointKindHint> joint;
  std::set<OpeningKind> opening_kind;

  bool operator==(const RoleFilter&) const = default;

  bool matches(const AssetRecord& a) const {
    if (!object_class.empty() && !object_class.count(a.object_class)) return false;
    if (!subtype.empty() && !subtype.count(a.subtype)) return false;
    if (tag && !a.has_tag(*tag)) return false;
    if (joint && !a.has_joint(*joint)) return false;
    return true;
  }
  bool matches(const Opening& o) const { return opening_kind.empty() || opening_kind.count(o.kind); }

  std::string describe() const {
    std::string out;
    auto add = [&](const std::string& s) { out += (out.empty() ? "" : ", ") + s; };
    auto join = [](const auto& items) {
      std::string s;
      for (const auto& i : items) {
        if (!s.empty()) s += "|";
        if constexpr (std::is_same_v<std::decay_t<decltype(i)>, std::string>) {
          s += i;
        } else {
          s += std::string(to_string(i));
        }
      }
      return s;
    };
    if (!object_class.empty()) add("object_class=" + join(object_class));
    if (!subtype.empty()) add("subtype=" + join(subtype));
    if (tag) add("tag=" + std::string(to_string(*tag)));
    if (joint) add("joint=" + std::string(to_string(*joint)));
    if (!opening_kind.empty()) add("opening_kind=" + join(opening_kind));
    return out.empty() ? "any" : out;
  }
};

struct InitialRelation {
  PredicateKind relation = PredicateKind::kOn;  // in or on
  std::string target;                          // role name

  bool operator==(const InitialRelation&) const = default;
};

struct InitialJoint {
  JointKindHint part = JointKindHint::kDoorLike;
  bool open = true;

  bool operator==(const InitialJoint&) const = default;
};

struct TaskRole {
  std::string name;
  RoleKind kind = RoleKind::kAsset;
  RoleFilter filter;
  bool spawn = false;  // always placed fresh rather than bound to an existing instance
  std::optional<InitialRelation> initial;
  std::optional<InitialJoint> initial_joint;

  bool operator==(const TaskRole&) const = default;
};

struct GoalSpec {
  PredicateKind kind = PredicateKind::kIn;
  std::string subject;  // role name
  std::string object;   // role name, for in/on
  std::optional<JointKindHint> part;
  bool open = true;       // joint_at target state
  double distance = 0.0;  // displaced threshold, meters

  bool operator==(const GoalSpec&) const = default;
};

struct TaskCounts {
  int n_assets = 1;
  int n_sequences = 1;

  bool operator==(const TaskCounts&) const = default;
  int total() const { return n_assets * n_sequences; }
};

struct TaskTemplate {
  std::string template_id;
  Tier tier = Tier::kBasic;
  TaskCategory category = TaskCategory::kPickPlace;
  std::string description;
  std::string instruction;  // {role} placeholders
  RoomType room_requirement = RoomType::kAny;
  std::vector<TaskRole> roles;
  std::vector<GoalSpec> goal;
  std::string primary_role;
  TaskCounts default_counts;

  bool operator==(const TaskTemplate&) const = default;

  const TaskRole* role(std::string_view name) const {
    for (const auto& r : roles) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
};

struct GoalPredicate {
  PredicateKind kind = PredicateKind::kIn;
  std::string subject;  // bound instance or opening id
  std::string object;
  std::string part;
  double value = 0.0;
  double tolerance = 0.0;
  double distance = 0.0;

  bool operator==(const GoalPredicate&) const = default;
};

struct TaskInstance {
  std::string scene_hash;
  std::string template_id;
  std::uint64_t episode_seed = 0;
  std::string primary_asset;  // asset_id, or opening_id for opening roles
  std::string room_id;
  std::map<std::string, std::string> bindings;  // role -> instance or opening id
  std::vector<PlacedAsset> spawned;             // placements added to the scene
  std::map<std::string, double> initial_joint_states;  // "<id>/<part>" -> value
  std::vector<GoalPredicate> goal;
  std::string language_instruction;

  bool operator==(const TaskInstance&) const = default;
};

// ---------------------------------------------------------------------------
// Template validation and loading

inline void validate_template(const TaskTemplate& t) {
  const std::string ctx = "template '" + t.template_id + "'";
  if (t.template_id.empty()) throw InvalidSpec("template_id must be non-empty");
  if (t.roles.empty()) throw InvalidSpec(ctx + ": roles must be non-empty");
  if (t.tier == Tier::kBasic && t.goal.size() > 2) {
    throw InvalidSpec(ctx + ": basic tasks have at most 2 goal predicates");
  }
  if (t.tier == Tier::kMultistage && t.goal.size() < 2) {
    throw InvalidSpec(ctx + ": multistage tasks have at least 2 goal predicates");
  }
  if (t.goal.empty()) throw InvalidSpec(ctx + ": goal must be non-empty");
  std::set<std::string> seen;
  for (const auto& r : t.roles) {
    if (!seen.insert(r.name).second) throw InvalidSpec(ctx + ": duplicate role '" + r.name + "'");
    if (r.kind == RoleKind::kOpening && (r.spawn || r.initial)) {
      throw InvalidSpec(ctx + ": opening role '" + r.name + "' cannot be spawned");
    }
    if (r.initial) {
      const TaskRole* target = t.role(r.initial->target);
      if (!target || !seen.count(target->name) || target->name == r.name) {
        throw InvalidSpec(ctx + ": role '" + r.name + "' rests on an undeclared earlier role");
      }
      if (!r.spawn) throw InvalidSpec(ctx + ": only spawned roles take an initial relation");
    }
  }
  if (!t.role(t.primary_role)) throw InvalidSpec(ctx + ": unknown primary_role '" + t.primary_role + "'");
  for (const auto& g : t.goal) {
    const TaskRole* s = t.role(g.subject);
    if (!s) throw InvalidSpec(ctx + ": goal references unknown role '" + g.subject + "'");
    if (g.kind == PredicateKind::kIn || g.kind == PredicateKind::kOn) {
      if (!t.role(g.object)) throw InvalidSpec(ctx + ": goal references unknown role '" + g.object + "'");
    }
    if (g.kind == PredicateKind::kJointAt || g.kind == PredicateKind::kPressed) {
      if (!g.part) throw InvalidSpec(ctx + ": joint goals name a part kind");
      if (s->kind == RoleKind::kOpening && *g.part != JointKindHint::kDoorLike) {
        throw InvalidSpec(ctx + ": openings only have a door_like leaf");
      }
    }
    if (g.kind == PredicateKind::kDisplaced && !(g.distance > 0.0)) {
      throw InvalidSpec(ctx + ": displaced distance must be positive");
    }
  }
  if (t.default_counts.n_assets <= 0 || t.default_counts.n_sequences <= 0) {
    throw InvalidSpec(ctx + ": counts must be positive");
  }
}

// Joint kinds a role's asset must expose for its goals and initial state.
inline std::set<JointKindHint> required_joints(const TaskTemplate& t, const TaskRole& role) {
  std::set<JointKindHint> out;
  if (role.filter.joint) out.insert(*role.filter.joint);
  if (role.initial_joint) out.insert(role.initial_joint->part);
  for (const auto& g : t.goal) {
    if (g.subject == role.name && g.part) out.insert(*g.part);
  }
  return out;
}

inline bool role_accepts(const TaskTemplate& t, const TaskRole& role, const AssetRecord& a) {
  if (!role.filter.matches(a)) return false;
  for (JointKindHint k : required_joints(t, role)) {
    if (!a.has_joint(k)) return false;
  }
  return true;
}

namespace task_json {

inline RoleFilter filter_from(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": filter must be an object");
  RoleFilter f;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "object_class") {
      for (const Json& s : get_array(j, key, ctx)) {
        if (!s.is_string()) throw ParseError(ctx + ".object_class: expected strings");
        f.object_class.insert(s.get<std::string>());
      }
    } else if (key == "subtype") {
      for (const Json& s : get_array(j, key, ctx)) f.subtype.insert(enum_from_json<Subtype>(s, key, ctx));
    } else if (key == "tag") {
      f.tag = enum_from_json<PlacementTag>(v, key, ctx);
    } else if (key == "joint") {
      f.joint = enum_from_json<JointKindHint>(v, key, ctx);
    } else if (key == "opening_kind") {
      for (const Json& s : get_array(j, key, ctx)) {
        f.opening_kind.insert(enum_from_json<OpeningKind>(s, key, ctx));
      }
    } else {
      throw ParseError(ctx + ": unknown filter key '" + key + "'");
    }
  }
  return f;
}

inline Json to_json(const RoleFilter& f) {
  Json j = Json::object();
  if (!f.object_class.empty()) j["object_class"] = f.object_class;
  if (!f.subtype.empty()) {
    Json a = Json::array();
    for (Subtype s : f.subtype) a.push_back(to_string(s));
    j["subtype"] = a;
  }
  if (f.tag) j["tag"] = to_string(*f.tag);
  if (f.joint) j["joint"] = to_string(*f.joint);
  if (!f.opening_kind.empty()) {
    Json a = Json::array();
    for (OpeningKind k : f.opening_kind) a.push_back(to_string(k));
    j["opening_kind"] = a;
  }
  return j;
}

inline bool parse_state(const std::string& s, const std::string& ctx) {
  if (s == "open") return true;
  if (s == "closed") return false;
  throw ParseError(ctx + ": joint state must be 'open' or 'closed'");
}

inline TaskTemplate template_from(const Json& j, const std::string& ctx) {
  TaskTemplate t;
  t.template_id = get_string(j, "template_id", ctx);
  t.tier = get_enum<Tier>(j, "tier", ctx);
  t.category = get_enum<TaskCategory>(j, "category", ctx);
  t.description = get_string(j, "description", ctx);
  t.instruction = get_string(j, "instruction", ctx);
  t.room_requirement = get_enum<RoomType>(j, "room_requirement", ctx);
  const Json& roles = get_array(j, "roles", ctx);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const std::string c = ctx + ".roles[" + std::to_string(i) + "]";
    TaskRole r;
    r.name = get_string(roles[i], "name", c);
    r.kind = get_enum<RoleKind>(roles[i], "kind", c);
    r.filter = filter_from(require(roles[i], "filter", c), c + ".filter");
    r.spawn = get_bool(roles[i], "spawn", c);
    if (roles[i].contains("initial")) {
      const Json& in = roles[i]["initial"];
      InitialRelation rel;
      rel.relation = get_enum<PredicateKind>(in, "relation", c + ".initial");
      if (rel.relation != PredicateKind::kIn && rel.relation != PredicateKind::kOn) {
        throw ParseError(c + ".initial: relation must be 'in' or 'on'");
      }
      rel.target = get_string(in, "target", c + ".initial");
      r.initial = rel;
    }
    if (roles[i].contains("initial_joint")) {
      const Json& ij = roles[i]["initial_joint"];
      r.initial_joint = InitialJoint{get_enum<JointKindHint>(ij, "part", c + ".initial_joint"),
                                     parse_state(get_string(ij, "state", c + ".initial_joint"), c)};
    }
    t.roles.push_back(std::move(r));
  }
  const Json& goal = get_array(j, "goal", ctx);
  for (std::size_t i = 0; i < goal.size(); ++i) {
    const std::string c = ctx + ".goal[" + std::to_string(i) + "]";
    GoalSpec g;
    g.kind = get_enum<PredicateKind>(goal[i], "predicate", c);
    g.subject = get_string(goal[i], "subject", c);
    switch (g.kind) {
      case PredicateKind::kIn:
      case PredicateKind::kOn:
        g.object = get_string(goal[i], "object", c);
        break;
      case PredicateKind::kJointAt:
        g.part = get_enum<JointKindHint>(goal[i], "part", c);
        g.open = parse_state(get_string(goal[i], "state", c), c);
        break;
      case PredicateKind::kPressed:
        g.part = get_enum<JointKindHint>(goal[i], "part", c);
        break;
      case PredicateKind::kDisplaced:
        g.distance = get_number(goal[i], "distance", c);
        break;
    }
    t.goal.push_back(std::move(g));
  }
  t.primary_role = get_string(j, "primary_role", ctx);
  const Json& counts = require(j, "default_counts", ctx);
  t.default_counts.n_assets = static_cast<int>(get_int(counts, "n_assets", ctx + ".default_counts"));
  t.default_counts.n_sequences = static_cast<int>(get_int(counts, "n_sequences", ctx + ".default_counts"));
  validate_template(t);
  return t;
}

inline Json to_json(const GoalPredicate& g) {
  Json j{{"predicate", to_string(g.kind)}, {"subject", g.subject}};
  switch (g.kind) {
    case PredicateKind::kIn:
    case PredicateKind::kOn:
      j["object"] = g.object;
      break;
    case PredicateKind::kJointAt:
      j["part"] = g.part;
      j["value"] = g.value;
      j["tolerance"] = g.tolerance;
      break;
    case PredicateKind::kPressed:
      j["part"] = g.part;
      break;
    case PredicateKind::kDisplaced:
      j["distance"] = g.distance;
      break;
  }
  return j;
}

}  // namespace task_json

inline std::vector<TaskTemplate> parse_task_templates(std::string_view text) {
  const Json j = parse_json_text(text, "task templates");
  if (!j.is_object()) throw ParseError("task templates: top level must be an object");
  const std::string schema = get_string(j, "schema_version", "task templates");
  if (schema != kTaskSchema) throw ParseError("task templates: unsupported schema_version '" + schema + "'");
  std::vector<TaskTemplate> out;
  std::set<std::string> ids;
  const Json& list = get_array(j, "templates", "task templates");
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(task_json::template_from(list[i], "templates[" + std::to_string(i) + "]"));
    if (!ids.insert(out.back().template_id).second) {
      throw InvalidSpec("duplicate template_id '" + out.back().template_id + "'");
    }
  }
  return out;
}

inline std::vector<TaskTemplate> load_task_templates(const std::string& path) {
  return parse_task_templates(read_file(path));
}

// ---------------------------------------------------------------------------
// Instantiation

namespace taskgen_detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Display name without a trailing catalog number ("Bowl 3" -> "bowl").
inline std::string spoken_name(const std::string& display_name) {
  std::string s = lower(display_name);
  std::size_t end = s.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(s[end - 1]))) --end;
  if (end < s.size() && end > 0 && s[end - 1] == ' ') s.resize(end - 1);
  return s;
}

inline std::string render(const std::string& pattern, const std::map<std::string, std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      const std::size_t end = pattern.find('}', i);
      if (end != std::string::npos) {
        auto it = names.find(pattern.substr(i + 1, end - i - 1));
        if (it != names.end()) {
          out += it->second;
          i = end;
          continue;
        }
      }
    }
    out.push_back(pattern[i]);
  }
  return out;
}

struct Binder {
  const SceneDocument& doc;
  const TaskTemplate& tmpl;
  const Catalog& catalog;
  const std::optional<std::string>& pinned;
  Rng rng;

  bool touches(const Opening& o, const Room& room) const {
    return o.room_a == room.room_id || o.room_b == room.room_id;
  }

  std::vector<const AssetRecord*> candidate_assets(const TaskRole& role, const Room& room) const {
    std::vector<const AssetRecord*> out;
    for (const auto& a : catalog.assets()) {
      if (!role_accepts(tmpl, role, a) || !a.fits_room(room.room_type)) continue;
      if (role.name == tmpl.primary_role && pinned && a.asset_id != *pinned) continue;
      out.push_back(&a);
    }
    return out;
  }

  [[noreturn]] void unsatisfiable(const TaskRole& role, const Room& room, const std::string& why) const {
    throw UnsatisfiableRole("role '" + role.name + "' (" + role.filter.describe() + ") in " + room.room_id +
                            ": " + why);
  }

  std::string place(SceneGraph& scene, const TaskRole& role, const Room& room,
                    const std::map<std::string, std::string>& bindings, Rng& r) const {
    auto options = candidate_assets(role, room);
    if (options.empty()) unsatisfiable(role, room, "no catalog asset matches");
    r.shuffle(options);
    const std::string* parent = nullptr;
    if (role.initial) parent = &bindings.at(role.initial->target);
    std::string failure = "no valid placement";
    for (std::size_t i = 0; i < options.size() && i < kPlacementCandidates; ++i) {
      try {
        return place_asset(scene, catalog, *options[i], room.room_id, r, parent);
      } catch (const PlacementExhausted& e) {
        failure = e.what();
      } catch (const SemanticMismatch& e) {
        failure = e.what();
      } catch (const RuleConflict& e) {
        failure = e.what();
      }
    }
    unsatisfiable(role, room, failure);
  }

  TaskInstance bind(const Room& room, std::uint64_t seed) {
    SceneGraph scene = doc.scene;
    const std::size_t original = scene.placed.size();
    TaskInstance inst;
    inst.scene_hash = doc.content_hash;
    inst.template_id = tmpl.template_id;
    inst.episode_seed = seed;
    inst.room_id = room.room_id;
    const Rng base = rng.child(room.room_id);
    // Reused instances per role, in draw order, for parent fallback.
    std::map<std::string, std::vector<std::string>> reused;
    std::set<std::string> parents_used;
    for (const TaskRole& role : tmpl.roles) {
      Rng r = base.child("role/" + role.name);
      if (role.kind == RoleKind::kOpening) {
        std::vector<const Opening*> options;
        for (const auto& level : scene.plan.floors) {
          for (const auto& o : level.openings) {
            if (!role.filter.matches(o) || !touches(o, room)) continue;
            if (role.name == tmpl.primary_role && pinned && o.opening_id != *pinned) continue;
            options.push_back(&o);
          }
        }
        if (options.empty()) unsatisfiable(role, room, "no matching opening");
        inst.bindings[role.name] = options[r.index(options.size())]->opening_id;
        continue;
      }
      if (!role.spawn) {
        std::vector<const PlacedAsset*> existing;
        for (const auto& p : scene.placed) {
          if (p.room_id != room.room_id) continue;
          const AssetRecord* a = catalog.find(p.asset_id);
          if (!a || !role_accepts(tmpl, role, *a)) continue;
          if (role.name == tmpl.primary_role && pinned && a->asset_id != *pinned) continue;
          existing.push_back(&p);
        }
        if (!existing.empty()) {
          r.shuffle(existing);
          for (const PlacedAsset* p : existing) reused[role.name].push_back(p->instance_id);
          inst.bindings[role.name] = existing.front()->instance_id;
          continue;
        }
      }
      if (!role.initial) {
        inst.bindings[role.name] = place(scene, role, room, inst.bindings, r);
        continue;
      }
      const std::string& target = role.initial->target;
      auto alt = reused.find(target);
      if (alt == reused.end() || parents_used.count(target)) {
        inst.bindings[role.name] = place(scene, role, room, inst.bindings, r);
      } else {
        // Try each reused parent until the spawned item fits on or in one.
        for (std::size_t k = 0;; ++k) {
          inst.bindings[target] = alt->second[k];
          try {
            inst.bindings[role.name] = place(scene, role, room, inst.bindings, r);
            break;
          } catch (const UnsatisfiableRole&) {
            if (k + 1 == alt->second.size()) throw;
          }
        }
      }
      parents_used.insert(target);
    }
    inst.spawned.assign(scene.placed.begin() + static_cast<std::ptrdiff_t>(original), scene.placed.end());

    std::map<std::string, std::string> names;
    for (const TaskRole& role : tmpl.roles) {
      const std::string& id = inst.bindings.at(role.name);
      if (role.kind == RoleKind::kOpening) {
        inst.initial_joint_states[id + "/" + std::string(kRoomDoorPart)] = 0.0;
        names[role.name] = "door";
        if (role.name == tmpl.primary_role) inst.primary_asset = id;
        continue;
      }
      const PlacedAsset* p = scene.find(id);
      const AssetRecord* a = catalog.find(p->asset_id);
      names[role.name] = spoken_name(a->display_name);
      if (role.name == tmpl.primary_role) inst.primary_asset = a->asset_id;
      if (!a->articulation) continue;
      const ArticulationPart* opened =
          role.initial_joint && role.initial_joint->open ? a->articulation->first_of(role.initial_joint->part)
                                                         : nullptr;
      for (const auto& part : a->articulation->parts) {
        const double v = &part == opened ? joint_for(*a, part).upper : 0.0;
        inst.initial_joint_states[id + "/" + part.part_id] = v;
      }
    }

    for (const GoalSpec& g : tmpl.goal) {
      GoalPredicate pred;
      pred.kind = g.kind;
      pred.subject = inst.bindings.at(g.subject);
      if (g.kind == PredicateKind::kIn || g.kind == PredicateKind::kOn) pred.object = inst.bindings.at(g.object);
      if (g.kind == PredicateKind::kDisplaced) pred.distance = g.distance;
      if (g.kind == PredicateKind::kJointAt || g.kind == PredicateKind::kPressed) {
        double travel = kRoomDoorOpenAngle;
        if (tmpl.role(g.subject)->kind == RoleKind::kOpening) {
          pred.part = std::string(kRoomDoorPart);
        } else {
          const AssetRecord* a = catalog.find(scene.find(pred.subject)->asset_id);
          const ArticulationPart* part = a->articulation ? a->articulation->first_of(*g.part) : nullptr;
          if (!part) unsatisfiable(*tmpl.role(g.subject), room, "asset lacks a " + std::string(to_string(*g.part)) + " part");
          pred.part = part->part_id;
          travel = joint_for(*a, *part).upper;
        }
        if (g.kind == PredicateKind::kJointAt) {
          pred.value = g.open ? travel : 0.0;
          pred.tolerance = kJointGoalTolerance * travel;
        }
      }
      inst.goal.push_back(std::move(pred));
    }
    inst.language_instruction = render(tmpl.instruction, names);
    return inst;
  }
};

inline bool room_fits(const Room& room, RoomType requirement) {
  return requirement == RoomType::kAny || room.room_type == requirement;
}

}  // namespace taskgen_detail

// Binds every role of `tmpl` inside one room of the scene. Spawned roles get
// fresh placements; other roles reuse a matching instance when the room has
// one. `pinned` fixes the primary role to one asset_id (or opening_id).
inline TaskInstance instantiate_task(const SceneDocument& doc, const TaskTemplate& tmpl, const Catalog& catalog,
                                     std::uint64_t seed, const std::optional<std::string>& pinned = std::nullopt) {
  validate_template(tmpl);
  std::vector<const Room*> rooms;
  for (const Room* r : doc.scene.plan.all_rooms()) {
    if (taskgen_detail::room_fits(*r, tmpl.room_requirement)) rooms.push_back(r);
  }
  if (rooms.empty()) {
    throw RoomMismatch("template '" + tmpl.template_id + "' needs a " +
                       std::string(to_string(tmpl.room_requirement)) + " room");
  }
  std::sort(rooms.begin(), rooms.end(), [](const Room* a, const Room* b) { return a->room_id < b->room_id; });
  taskgen_detail::Binder binder{doc, tmpl, catalog, pinned, Rng(seed, "taskgen/instance")};
  Rng order = binder.rng.child("rooms");
  order.shuffle(rooms);
  std::optional<UnsatisfiableRole> last;
  for (const Room* room : rooms) {
    try {
      return binder.bind(*room, seed);
    } catch (const UnsatisfiableRole& e) {
      if (!last) last.emplace(e);
    }
  }
  throw *last;
}

// ---------------------------------------------------------------------------
// Batch manifests

struct TemplateBatch {
  std::string template_id;
  TaskCounts counts;
  std::vector<std::string> primary_assets;
  std::vector<TaskInstance> instances;

  bool operator==(const TemplateBatch&) const = default;
};

struct EpisodeManifest {
  std::string schema_version{kManifestSchema};
  std::uint64_t seed = 0;
  std::string embodiment;
  bool vary_scenes = false;
  std::vector<TemplateBatch> batches;
  std::map<std::string, std::string> scenes;  // content_hash -> scene_key

  bool operator==(const EpisodeManifest&) const = default;

  std::size_t total_instances() const {
    std::size_t n = 0;
    for (const auto& b : batches) n += b.instances.size();
    return n;
  }
};

struct BatchOptions {
  std::string embodiment = "unitree_g1";
  // Spread the sequences of one primary asset over several scenes instead
  // of varying poses within a single scene.
  bool vary_scenes = false;
  int scene_attempts = 12;
  int sequence_retries = 4;
};

namespace taskgen_detail {

struct PrimaryCandidate {
  std::string id;                     // asset_id or opening_id
  std::optional<std::size_t> scene;   // fixed scene for opening roles
};

inline std::vector<PrimaryCandidate> primary_candidates(const TaskTemplate& t, const std::vector<SceneDocument>& scenes,
                                                        const std::vector<std::size_t>& compatible,
                                                        const Catalog& catalog) {
  const TaskRole& role = *t.role(t.primary_role);
  std::vector<PrimaryCandidate> out;
  if (role.kind == RoleKind::kOpening) {
    for (std::size_t s : compatible) {
      for (const auto& level : scenes[s].scene.plan.floors) {
        for (const auto& o : level.openings) {
          if (role.filter.matches(o)) out.push_back({o.opening_id, s});
        }
      }
    }
    return out;
  }
  for (const auto& a : catalog.assets()) {
    if (!role_accepts(t, role, a)) continue;
    if (t.room_requirement != RoomType::kAny && !a.fits_room(t.room_requirement)) continue;
    out.push_back({a.asset_id, std::nullopt});
  }
  return out;
}

}  // namespace taskgen_detail

inline EpisodeManifest batch_manifest(const std::vector<TaskTemplate>& templates,
                                      const std::vector<SceneDocument>& scenes, const Catalog& catalog,
                                      const std::map<std::string, TaskCounts>& counts, std::uint64_t seed,
                                      const BatchOptions& options = {}) {
  const auto& tags = known_embodiments();
  if (std::find(tags.begin(), tags.end(), options.embodiment) == tags.end()) {
    throw InvalidSpec("unknown embodiment '" + options.embodiment + "'");
  }
  EpisodeManifest manifest;
  manifest.seed = seed;
  manifest.embodiment = options.embodiment;
  manifest.vary_scenes = options.vary_scenes;
  std::set<std::uint64_t> used_seeds;
  std::vector<const TaskTemplate*> ordered;
  for (const auto& t : templates) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const TaskTemplate* a, const TaskTemplate* b) { return a->template_id < b->template_id; });

  for (const TaskTemplate* tp : ordered) {
    const TaskTemplate& t = *tp;
    validate_template(t);
    auto cit = counts.find(t.template_id);
    const TaskCounts c = cit == counts.end() ? t.default_counts : cit->second;
    if (c.n_assets <= 0 || c.n_sequences <= 0) {
      throw InvalidSpec("template '" + t.template_id + "': counts must be positive");
    }
    std::vector<std::size_t> compatible;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      for (const Room* r : scenes[s].scene.plan.all_rooms()) {
        if (taskgen_detail::room_fits(*r, t.room_requirement)) {
          compatible.push_back(s);
          break;
        }
      }
    }
    auto candidates = taskgen_detail::primary_candidates(t, scenes, compatible, catalog);
    if (candidates.size() < static_cast<std::size_t>(c.n_assets)) {
      throw InsufficientAssets("template '" + t.template_id + "' needs " + std::to_string(c.n_assets) +
                               " distinct primary assets, found " + std::to_string(candidates.size()));
    }
    const Rng base = Rng(seed, "taskgen/manifest").child(t.template_id);
    Rng shuffle_rng = base.child("candidates");
    shuffle_rng.shuffle(candidates);
    Rng scene_rng = base.child("scenes");
    scene_rng.shuffle(compatible);

    TemplateBatch batch;
    batch.template_id = t.template_id;
    batch.counts = c;
    auto next_seed = [&](const std::string& path) {
      std::uint64_t s = derive_seed(seed, path);
      for (int k = 0; used_seeds.count(s); ++k) s = derive_seed(seed, path + "/" + std::to_string(k));
      return s;
    };
    for (const auto& cand : candidates) {
      if (batch.primary_assets.size() == static_cast<std::size_t>(c.n_assets)) break;
      const std::string key = t.template_id + "/" + cand.id +
                              (cand.scene ? "@" + scenes[*cand.scene].content_hash : std::string());
      // Scenes tried for this candidate, rotated so assets spread over the corpus.
      std::vector<std::size_t> order;
      if (cand.scene) {
        order.push_back(*cand.scene);
      } else if (!compatible.empty()) {
        const std::size_t start = batch.primary_assets.size() % compatible.size();
        for (std::size_t k = 0; k < compatible.size(); ++k) order.push_back(compatible[(start + k) % compatible.size()]);
      }
      std::vector<TaskInstance> instances;
      std::set<std::uint64_t> local_seeds;
      auto attempt = [&](std::size_t scene, int seq, int retries) -> bool {
        for (int r = 0; r <= retries; ++r) {
          std::string path = key + "/seq/" + std::to_string(seq);
          if (r > 0) path += "/retry/" + std::to_string(r);
          std::uint64_t s = next_seed(path);
          while (local_seeds.count(s)) s = derive_seed(s, "bump");
          try {
            instances.push_back(instantiate_task(scenes[scene], t, catalog, s, cand.id));
            local_seeds.insert(s);
            return true;
          } catch (const UnsatisfiableRole&) {
          } catch (const RoomMismatch&) {
          }
        }
        return false;
      };
      std::optional<std::size_t> home;
      const std::size_t tries = std::min<std::size_t>(order.size(), static_cast<std::size_t>(options.scene_attempts));
      for (std::size_t k = 0; k < tries && !home; ++k) {
        if (attempt(order[k], 0, 1)) home = k;
      }
      if (!home) continue;
      bool ok = true;
      for (int seq = 1; seq < c.n_sequences && ok; ++seq) {
        // The home scene first (or the next scene when varying), then the
        // rest of the corpus as a fallback.
        const std::size_t first = options.vary_scenes ? *home + static_cast<std::size_t>(seq) : *home;
        ok = false;
        for (std::size_t k = 0; k < tries && !ok; ++k) {
          ok = attempt(order[(first + k) % order.size()], seq, k == 0 ? options.sequence_retries : 1);
        }
      }
      if (!ok) continue;
      used_seeds.insert(local_seeds.begin(), local_seeds.end());
      batch.primary_assets.push_back(cand.scene ? scenes[*cand.scene].content_hash + "#" + cand.id : cand.id);
      for (auto& inst : instances) {
        const SceneDocument* doc = nullptr;
        for (const auto& s : scenes) {
          if (s.content_hash == inst.scene_hash) doc = &s;
        }
        manifest.scenes[inst.scene_hash] = doc ? doc->generation.scene_key : "";
        batch.instances.push_back(std::move(inst));
      }
    }
    if (batch.primary_assets.size() < static_cast<std::size_t>(c.n_assets)) {
      throw InsufficientAssets("template '" + t.template_id + "' needs " + std::to_string(c.n_assets) +
                               " distinct primary assets, only " + std::to_string(batch.primary_assets.size()) +
                               " could be instantiated");
    }
    manifest.batches.push_back(std::move(batch));
  }
  return manifest;
}

inline Json to_json(const TaskInstance& inst) {
  Json spawned = Json::array();
  for (const auto& p : inst.spawned) spawned.push_back(scene_json::to_json(p));
  Json goal = Json::array();
  for (const auto& g : inst.goal) goal.push_back(task_json::to_json(g));
  Json joints = Json::object();
  for (const auto& [k, v] : inst.initial_joint_states) joints[k] = v;
  return {{"scene", inst.scene_hash},
          {"template_id", inst.template_id},
          {"episode_seed", inst.episode_seed},
          {"primary_asset", inst.primary_asset},
          {"room_id", inst.room_id},
          {"bindings", inst.bindings},
          {"spawned", spawned},
          {"initial_joint_states", joints},
          {"goal", goal},
          {"language_instruction", inst.language_instruction}};
}

inline Json to_json(const EpisodeManifest& m) {
  Json batches = Json::array();
  for (const auto& b : m.batches) {
    Json instances = Json::array();
    for (const auto& i : b.instances) instances.push_back(to_json(i));
    batches.push_back({{"template_id", b.template_id},
                       {"n_assets", b.counts.n_assets},
                       {"n_sequences", b.counts.n_sequences},
                       {"total", b.instances.size()},
                       {"primary_assets", b.primary_assets},
                       {"instances", instances}});
  }
  Json scenes = Json::array();
  for (const auto& [hash, key] : m.scenes) scenes.push_back({{"content_hash", hash}, {"scene_key", key}});
  return {{"schema_version", m.schema_version},
          {"seed", m.seed},
          {"embodiment", m.embodiment},
          {"vary_scenes", m.vary_scenes},
          {"total_instances", m.total_instances()},
          {"scenes", scenes},
          {"templates", batches}};
}

inline std::string serialize_manifest(const EpisodeManifest& m) { return canonical_dump(to_json(m)); }

}  // namespace scenesmith
