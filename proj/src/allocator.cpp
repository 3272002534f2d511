#include "multibandit/allocator.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "multibandit/errors.hpp"

namespace multibandit {

namespace {

using nlohmann::json;

std::string next_description_id(const TaskRecord& task) {
  return task.task_id + "-d" + std::to_string(task.descriptions.size() + 1);
}

void update_ewma(AnnotationState& state, UnitKind kind, double minutes) {
  const double lambda = state.config.ewma_lambda;
  double& estimate = kind == UnitKind::Describe
                         ? state.config.describe_minutes
                         : state.config.build_minutes;
  estimate = (1.0 - lambda) * estimate + lambda * minutes;
}

}  // namespace

ProjectedWorld project_world(const AnnotationState& state) {
  ProjectedWorld projected;
  projected.world.casinos.reserve(state.tasks.size());
  projected.arm_descriptions.reserve(state.tasks.size());
  for (std::size_t t = 0; t < state.tasks.size(); ++t) {
    const TaskRecord& task = state.tasks[t];
    CasinoState casino;
    casino.casino_id = static_cast<int>(t);
    std::vector<std::size_t> arm_map;
    for (std::size_t d = 0; d < task.descriptions.size(); ++d) {
      const DescriptionRecord& desc = task.descriptions[d];
      const std::int64_t pulls = desc.successes + desc.failures;
      if (pulls == 0) {
        // A description nobody has built from yet is not an arm; it gets
        // its first observation through next_unit's routing below.
        continue;
      }
      casino.arms.push_back(ArmRecord{static_cast<int>(casino.arms.size()),
                                      desc.successes, desc.failures});
      casino.total_observations += pulls;
      arm_map.push_back(d);
    }
    projected.world.casinos.push_back(std::move(casino));
    projected.arm_descriptions.push_back(std::move(arm_map));
  }
  return projected;
}

UnitAssignment next_unit(AnnotationState& state, double remaining_minutes,
                         PolicyKind policy, Rng& rng) {
  if (state.tasks.empty()) {
    throw EmptyWorld("no tasks registered");
  }
  const ProjectedWorld projected = project_world(state);
  PolicyState pstate;
  const auto [action, ignored] =
      select_action(policy, pstate, projected.world, rng);

  const std::size_t t = static_cast<std::size_t>(action.casino_id);
  TaskRecord& task = state.tasks[t];

  UnitAssignment assignment;
  assignment.task_id = task.task_id;

  std::optional<std::size_t> build_description;
  if (action.is_new()) {
    // With describe_counts_as_build off, a successful Describe leaves a
    // description with no observations. That description *is* the task's
    // newest arm, so "sample a new arm" means giving it its first build
    // rather than asking for yet another description.
    for (std::size_t d = 0; d < task.descriptions.size(); ++d) {
      if (task.descriptions[d].successes + task.descriptions[d].failures == 0) {
        build_description = d;
        break;
      }
    }
  } else {
    build_description =
        projected.arm_descriptions[t][static_cast<std::size_t>(action.arm_id)];
  }

  if (build_description.has_value()) {
    assignment.kind = UnitAssignment::Kind::Build;
    assignment.description_id =
        task.descriptions[*build_description].description_id;
    assignment.estimated_minutes = state.config.build_minutes;
  } else {
    assignment.kind = UnitAssignment::Kind::Describe;
    assignment.estimated_minutes = state.config.describe_minutes;
  }

  if (assignment.estimated_minutes > remaining_minutes) {
    return UnitAssignment::session_done();
  }

  UnitRecord unit;
  unit.unit_id = state.unit_log.empty() ? 1 : state.unit_log.back().unit_id + 1;
  unit.kind = assignment.kind == UnitAssignment::Kind::Build
                  ? UnitKind::Build
                  : UnitKind::Describe;
  unit.task_id = task.task_id;
  if (assignment.kind == UnitAssignment::Kind::Build) {
    unit.description_id = assignment.description_id;
  }
  unit.outcome = UnitOutcome::Pending;
  state.unit_log.push_back(std::move(unit));
  assignment.unit_id = state.unit_log.back().unit_id;
  return assignment;
}

UnitAssignment next_unit(AnnotationState& state, double remaining_minutes) {
  Rng rng(0);
  return next_unit(state, remaining_minutes, PolicyKind::CasInf, rng);
}

void record_unit_result(AnnotationState& state, std::int64_t unit_id,
                        UnitOutcome outcome, double minutes,
                        const std::string& external_ref) {
  if (outcome == UnitOutcome::Pending) {
    throw StateError("a unit cannot be resolved to pending");
  }
  UnitRecord* unit = nullptr;
  for (UnitRecord& u : state.unit_log) {
    if (u.unit_id == unit_id) {
      unit = &u;
      break;
    }
  }
  if (unit == nullptr) {
    throw StateError("unknown unit " + std::to_string(unit_id));
  }
  if (unit->outcome != UnitOutcome::Pending) {
    throw StateError("unit " + std::to_string(unit_id) +
                     " is already resolved");
  }

  TaskRecord* task = nullptr;
  for (TaskRecord& t : state.tasks) {
    if (t.task_id == unit->task_id) {
      task = &t;
      break;
    }
  }
  if (task == nullptr) {
    throw StateError("unit " + std::to_string(unit_id) +
                     " references unknown task " + unit->task_id);
  }

  if (unit->kind == UnitKind::Describe) {
    if (outcome == UnitOutcome::Success) {
      DescriptionRecord desc;
      desc.description_id = next_description_id(*task);
      desc.external_ref = external_ref;
      if (state.config.describe_counts_as_build) {
        // The describer verified their own description, which is the
        // arm's first observation.
        desc.successes = 1;
      }
      unit->description_id = desc.description_id;
      task->descriptions.push_back(std::move(desc));
    }
    // A failed verification discards the description; only the unit log
    // remembers the attempt.
  } else {
    if (!unit->description_id.has_value()) {
      throw StateError("build unit " + std::to_string(unit_id) +
                       " has no description");
    }
    DescriptionRecord* desc = nullptr;
    for (DescriptionRecord& d : task->descriptions) {
      if (d.description_id == *unit->description_id) {
        desc = &d;
        break;
      }
    }
    if (desc == nullptr) {
      throw StateError("unit " + std::to_string(unit_id) +
                       " references unknown description " +
                       *unit->description_id);
    }
    if (outcome == UnitOutcome::Success) {
      ++desc->successes;
    } else {
      ++desc->failures;
    }
  }

  unit->outcome = outcome;
  unit->minutes = minutes;
  update_ewma(state, unit->kind, minutes);
}

// --- persistence -----------------------------------------------------------

namespace {

std::string unit_kind_name(UnitKind kind) {
  return kind == UnitKind::Describe ? "describe" : "build";
}

std::string outcome_name(UnitOutcome outcome) {
  switch (outcome) {
    case UnitOutcome::Pending:
      return "pending";
    case UnitOutcome::Success:
      return "success";
    case UnitOutcome::Failure:
      return "failure";
  }
  return "?";
}

json state_to_json(const AnnotationState& state) {
  json tasks = json::array();
  for (const TaskRecord& task : state.tasks) {
    json descriptions = json::array();
    for (const DescriptionRecord& desc : task.descriptions) {
      descriptions.push_back(json{{"description_id", desc.description_id},
                                  {"external_ref", desc.external_ref},
                                  {"successes", desc.successes},
                                  {"failures", desc.failures}});
    }
    tasks.push_back(
        json{{"task_id", task.task_id}, {"descriptions", descriptions}});
  }
  json unit_log = json::array();
  for (const UnitRecord& unit : state.unit_log) {
    json u{{"unit_id", unit.unit_id},
           {"kind", unit_kind_name(unit.kind)},
           {"task_id", unit.task_id},
           {"outcome", outcome_name(unit.outcome)}};
    u["description_id"] =
        unit.description_id ? json(*unit.description_id) : json(nullptr);
    u["minutes"] = unit.minutes ? json(*unit.minutes) : json(nullptr);
    unit_log.push_back(std::move(u));
  }
  return json{
      {"version", 1},
      {"config",
       {{"session_minutes", state.config.session_minutes},
        {"describe_minutes", state.config.describe_minutes},
        {"build_minutes", state.config.build_minutes},
        {"ewma_lambda", state.config.ewma_lambda},
        {"describe_counts_as_build", state.config.describe_counts_as_build}}},
      {"tasks", tasks},
      {"unit_log", unit_log}};
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(path);
  }
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key,
                         const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(path);
  return v.get<std::string>();
}

std::int64_t count_field(const json& obj, const char* key,
                         const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(path);
  }
  return v.get<std::int64_t>();
}

double number_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw SchemaError(path);
  return v.get<double>();
}

AnnotationState state_from_json(const json& j) {
  AnnotationState state;

  const json& version = field(j, "version", "version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw SchemaError("version");
  }

  const json& config = field(j, "config", "config");
  state.config.session_minutes =
      number_field(config, "session_minutes", "config.session_minutes");
  state.config.describe_minutes =
      number_field(config, "describe_minutes", "config.describe_minutes");
  state.config.build_minutes =
      number_field(config, "build_minutes", "config.build_minutes");
  state.config.ewma_lambda =
      number_field(config, "ewma_lambda", "config.ewma_lambda");
  if (state.config.session_minutes <= 0 || state.config.describe_minutes <= 0 ||
      state.config.build_minutes <= 0) {
    throw SchemaError("config.session_minutes");
  }
  if (state.config.ewma_lambda < 0.0 || state.config.ewma_lambda > 1.0) {
    throw SchemaError("config.ewma_lambda");
  }
  const json& dcb = field(config, "describe_counts_as_build",
                          "config.describe_counts_as_build");
  if (!dcb.is_boolean()) {
    throw SchemaError("config.describe_counts_as_build");
  }
  state.config.describe_counts_as_build = dcb.get<bool>();

  const json& tasks = field(j, "tasks", "tasks");
  if (!tasks.is_array()) throw SchemaError("tasks");
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const std::string tpath = "tasks[" + std::to_string(t) + "]";
    const json& tj = tasks[t];
    TaskRecord task;
    task.task_id = string_field(tj, "task_id", tpath + ".task_id");
    for (const TaskRecord& existing : state.tasks) {
      if (existing.task_id == task.task_id) {
        throw SchemaError(tpath + ".task_id");
      }
    }
    const json& descriptions =
        field(tj, "descriptions", tpath + ".descriptions");
    if (!descriptions.is_array()) throw SchemaError(tpath + ".descriptions");
    for (std::size_t d = 0; d < descriptions.size(); ++d) {
      const std::string dpath =
          tpath + ".descriptions[" + std::to_string(d) + "]";
      const json& dj = descriptions[d];
      DescriptionRecord desc;
      desc.description_id =
          string_field(dj, "description_id", dpath + ".description_id");
      desc.external_ref =
          string_field(dj, "external_ref", dpath + ".external_ref");
      desc.successes = count_field(dj, "successes", dpath + ".successes");
      desc.failures = count_field(dj, "failures", dpath + ".failures");
      for (const DescriptionRecord& existing : task.descriptions) {
        if (existing.description_id == desc.description_id) {
          throw SchemaError(dpath + ".description_id");
        }
      }
      task.descriptions.push_back(std::move(desc));
    }
    state.tasks.push_back(std::move(task));
  }

  const json& unit_log = field(j, "unit_log", "unit_log");
  if (!unit_log.is_array()) throw SchemaError("unit_log");
  for (std::size_t u = 0; u < unit_log.size(); ++u) {
    const std::string upath = "unit_log[" + std::to_string(u) + "]";
    const json& uj = unit_log[u];
    UnitRecord unit;
    const json& id = field(uj, "unit_id", upath + ".unit_id");
    if (!id.is_number_integer() || id.get<std::int64_t>() < 1) {
      throw SchemaError(upath + ".unit_id");
    }
    unit.unit_id = id.get<std::int64_t>();
    if (!state.unit_log.empty() &&
        unit.unit_id <= state.unit_log.back().unit_id) {
      throw SchemaError(upath + ".unit_id");
    }

    const std::string kind = string_field(uj, "kind", upath + ".kind");
    if (kind == "describe") {
      unit.kind = UnitKind::Describe;
    } else if (kind == "build") {
      unit.kind = UnitKind::Build;
    } else {
      throw SchemaError(upath + ".kind");
    }

    unit.task_id = string_field(uj, "task_id", upath + ".task_id");
    const TaskRecord* task = nullptr;
    for (const TaskRecord& t : state.tasks) {
      if (t.task_id == unit.task_id) {
        task = &t;
        break;
      }
    }
    if (task == nullptr) throw SchemaError(upath + ".task_id");

    const json& desc_id =
        field(uj, "description_id", upath + ".description_id");
    if (desc_id.is_string()) {
      unit.description_id = desc_id.get<std::string>();
    } else if (!desc_id.is_null()) {
      throw SchemaError(upath + ".description_id");
    }
    if (unit.kind == UnitKind::Build) {
      if (!unit.description_id.has_value()) {
        throw SchemaError(upath + ".description_id");
      }
      bool found = false;
      for (const DescriptionRecord& d : task->descriptions) {
        if (d.description_id == *unit.description_id) {
          found = true;
          break;
        }
      }
      if (!found) throw SchemaError(upath + ".description_id");
    }

    const std::string outcome = string_field(uj, "outcome", upath + ".outcome");
    if (outcome == "pending") {
      unit.outcome = UnitOutcome::Pending;
    } else if (outcome == "success") {
      unit.outcome = UnitOutcome::Success;
    } else if (outcome == "failure") {
      unit.outcome = UnitOutcome::Failure;
    } else {
      throw SchemaError(upath + ".outcome");
    }

    const json& minutes = field(uj, "minutes", upath + ".minutes");
    if (minutes.is_number()) {
      if (minutes.get<double>() < 0) throw SchemaError(upath + ".minutes");
      unit.minutes = minutes.get<double>();
    } else if (!minutes.is_null()) {
      throw SchemaError(upath + ".minutes");
    }

    state.unit_log.push_back(std::move(unit));
  }

  return state;
}

}  // namespace

void save_state(const AnnotationState& state, const std::string& path) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError(temp, "cannot open for writing");
    }
    out << state_to_json(state).dump(2) << '\n';
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(temp, ec);
      throw IoError(temp, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError(path, "rename failed");
  }
}

AnnotationState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("(document) ") + e.what());
  }
  return state_from_json(j);
}

AnnotationState import_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  AnnotationState state;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ImportError(line_no, e.what());
    }
    if (!record.is_object()) {
      throw ImportError(line_no, "record is not an object");
    }
    for (const char* key : {"task_id", "description_id", "actor", "outcome"}) {
      if (!record.contains(key) || !record.at(key).is_string()) {
        throw ImportError(line_no, std::string("missing or non-string field ") +
                                       key);
      }
    }
    const std::string task_id = record.at("task_id").get<std::string>();
    const std::string description_id =
        record.at("description_id").get<std::string>();
    const std::string actor = record.at("actor").get<std::string>();
    const std::string outcome_s = record.at("outcome").get<std::string>();

    if (actor != "describer" && actor != "builder") {
      throw ImportError(line_no, "actor must be describer or builder");
    }
    if (outcome_s != "success" && outcome_s != "failure") {
      throw ImportError(line_no, "outcome must be success or failure");
    }
    const bool success = outcome_s == "success";

    std::optional<double> minutes;
    if (record.contains("minutes") && !record.at("minutes").is_null()) {
      if (!record.at("minutes").is_number()) {
        throw ImportError(line_no, "minutes must be a number");
      }
      minutes = record.at("minutes").get<double>();
    }

    TaskRecord* task = nullptr;
    for (TaskRecord& t : state.tasks) {
      if (t.task_id == task_id) {
        task = &t;
        break;
      }
    }
    if (task == nullptr) {
      state.tasks.push_back(TaskRecord{task_id, {}});
      task = &state.tasks.back();
    }

    UnitRecord unit;
    unit.unit_id =
        state.unit_log.empty() ? 1 : state.unit_log.back().unit_id + 1;
    unit.task_id = task_id;
    unit.outcome = success ? UnitOutcome::Success : UnitOutcome::Failure;
    unit.minutes = minutes;

    if (actor == "describer") {
      unit.kind = UnitKind::Describe;
      if (success) {
        for (const DescriptionRecord& d : task->descriptions) {
          if (d.description_id == description_id) {
            throw ImportError(line_no,
                              "description " + description_id +
                                  " already exists in task " + task_id);
          }
        }
        DescriptionRecord desc;
        desc.description_id = description_id;
        if (record.contains("external_ref") &&
            record.at("external_ref").is_string()) {
          desc.external_ref = record.at("external_ref").get<std::string>();
        }
        if (state.config.describe_counts_as_build) {
          desc.successes = 1;
        }
        unit.description_id = description_id;
        task->descriptions.push_back(std::move(desc));
      }
      // A failed describe is discarded; the unit alone records it.
    } else {
      unit.kind = UnitKind::Build;
      DescriptionRecord* desc = nullptr;
      for (DescriptionRecord& d : task->descriptions) {
        if (d.description_id == description_id) {
          desc = &d;
          break;
        }
      }
      if (desc == nullptr) {
        throw ImportError(line_no, "unknown description " + description_id +
                                       " in task " + task_id);
      }
      unit.description_id = description_id;
      if (success) {
        ++desc->successes;
      } else {
        ++desc->failures;
      }
    }

    if (minutes.has_value()) {
      update_ewma(state, unit.kind, *minutes);
    }
    state.unit_log.push_back(std::move(unit));
  }
  return state;
}

}  // namespace multibandit
