#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "multibandit/allocator.hpp"
#include "multibandit/errors.hpp"
#include "multibandit/harness.hpp"

// Exit codes: 0 ok, 2 usage/config, 3 I/O, 4 state/schema.

namespace {

using multibandit::AnnotationState;
using multibandit::ExperimentConfig;
using multibandit::ExperimentReport;
using multibandit::PolicyKind;
using multibandit::UnitAssignment;
using multibandit::UnitOutcome;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitState = 4;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    parts.push_back(part);
  }
  return parts;
}

std::vector<PolicyKind> parse_policy_list(const std::string& text) {
  std::vector<PolicyKind> policies;
  for (const std::string& name : split_commas(text)) {
    const auto kind = multibandit::parse_policy(name);
    if (!kind) {
      throw CLI::ValidationError(
          "--policies", "unknown policy '" + name +
                            "' (expected rand, tile, tile-inf or cas-inf)");
    }
    policies.push_back(*kind);
  }
  if (policies.empty()) {
    throw CLI::ValidationError("--policies", "at least one policy required");
  }
  return policies;
}

std::vector<int> parse_checkpoints(const std::string& text) {
  std::vector<int> checkpoints;
  if (text.empty()) return checkpoints;
  for (const std::string& part : split_commas(text)) {
    try {
      checkpoints.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--checkpoints",
                                 "bad checkpoint '" + part + "'");
    }
  }
  return checkpoints;
}

AnnotationState load_state_or_exit_hints(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    // Reported as a usage error: the caller pointed at the wrong file.
    throw CLI::ValidationError("--state", "state file not found: " + path);
  }
  return multibandit::load_state(path);
}

int run_simulate(const ExperimentConfig& config, const std::string& out_csv,
                 const std::string& out_svg, const std::string& out_json) {
  const ExperimentReport report = multibandit::run_experiment(config);
  multibandit::write_report(report, multibandit::ReportFormat::Csv, out_csv);
  if (!out_svg.empty()) {
    multibandit::write_report(report, multibandit::ReportFormat::Svg, out_svg);
  }
  if (!out_json.empty()) {
    multibandit::write_report(report, multibandit::ReportFormat::Json,
                              out_json);
  }
  std::ostringstream summary;
  summary << "wrote " << out_csv << " (" << report.policies.size() << " x "
          << config.repetitions << " episodes, "
          << report.wall_clock_seconds << " s)\n";
  for (const multibandit::PolicyReport& pr : report.policies) {
    summary << "  " << multibandit::policy_name(pr.policy)
            << ": mean regret " << pr.mean_regret << " +/- " << pr.std_regret
            << ", mean reward " << pr.mean_reward << "\n";
  }
  std::cerr << summary.str();
  return kExitOk;
}

json assignment_json(const UnitAssignment& assignment) {
  switch (assignment.kind) {
    case UnitAssignment::Kind::SessionDone:
      return json{{"assignment", "session_done"}};
    case UnitAssignment::Kind::Describe:
      return json{{"assignment", "describe"},
                  {"task_id", assignment.task_id},
                  {"unit_id", assignment.unit_id},
                  {"estimated_minutes", assignment.estimated_minutes}};
    case UnitAssignment::Kind::Build:
      return json{{"assignment", "build"},
                  {"task_id", assignment.task_id},
                  {"description_id", assignment.description_id},
                  {"unit_id", assignment.unit_id},
                  {"estimated_minutes", assignment.estimated_minutes}};
  }
  return json{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-bandit, infinite-arm, best-arm identification toolkit"};
  app.require_subcommand(1);

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "run the policy-vs-environment regret comparison");
  std::string policies_flag = "rand,tile,tile-inf,cas-inf";
  int casinos = 100;
  int budget = 600;
  int reps = 100;
  std::uint64_t seed = 7;
  int pool = 1000;
  double sigma = 0.2;
  std::string out_csv = "results.csv";
  std::string out_svg;
  std::string out_json;
  std::string checkpoints_flag;
  int threads = 0;
  simulate->add_option("--policies", policies_flag,
                       "comma-separated policies to compare")
      ->capture_default_str();
  simulate->add_option("--casinos", casinos, "number of casinos N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--budget", budget, "total observation budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--reps", reps, "independent repetitions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", seed, "root seed for all randomness")
      ->capture_default_str();
  simulate->add_option("--pool", pool, "pre-sampled arms per casino")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--sigma", sigma, "arm quality spread within a casino")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--out", out_csv, "results CSV path")
      ->capture_default_str();
  simulate->add_option("--svg", out_svg, "optional whisker chart path");
  simulate->add_option("--json", out_json, "optional full report path");
  simulate->add_option("--checkpoints", checkpoints_flag,
                       "comma-separated intermediate budgets to score");
  simulate->add_option("--threads", threads,
                       "worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  // allocate ------------------------------------------------------------
  auto* allocate = app.add_subcommand(
      "allocate", "pick the next annotation unit for a session");
  std::string state_path;
  double remaining_minutes = 0.0;
  std::string policy_flag = "cas-inf";
  std::uint64_t alloc_seed = 7;
  allocate->add_option("--state", state_path, "annotation state file")
      ->required();
  allocate
      ->add_option("--remaining-minutes", remaining_minutes,
                   "minutes left in the participant's session")
      ->check(CLI::NonNegativeNumber)
      ->required();
  allocate->add_option("--policy", policy_flag, "allocation policy")
      ->capture_default_str();
  allocate->add_option("--seed", alloc_seed, "seed (used by the rand policy)")
      ->capture_default_str();

  // record --------------------------------------------------------------
  auto* record = app.add_subcommand(
      "record", "resolve a pending unit with its outcome");
  std::string record_state;
  std::int64_t unit_id = 0;
  std::string outcome_flag;
  double minutes = 0.0;
  std::string external_ref;
  record->add_option("--state", record_state, "annotation state file")
      ->required();
  record->add_option("--unit", unit_id, "unit id to resolve")->required();
  record->add_option("--outcome", outcome_flag, "success or failure")
      ->check(CLI::IsMember({"success", "failure"}))
      ->required();
  record->add_option("--minutes", minutes, "minutes the unit actually took")
      ->check(CLI::NonNegativeNumber)
      ->required();
  record->add_option("--ref", external_ref,
                     "external reference for a newly created description");

  // import --------------------------------------------------------------
  auto* import_cmd = app.add_subcommand(
      "import", "rebuild a state file from an observation log");
  std::string import_state;
  std::string log_path;
  import_cmd->add_option("--state", import_state, "state file to write")
      ->required();
  import_cmd->add_option("--log", log_path, "newline-delimited JSON log")
      ->required();

  // report --------------------------------------------------------------
  auto* report_cmd = app.add_subcommand(
      "report", "render a whisker chart from a results CSV");
  std::string report_in;
  std::string report_svg_path;
  report_cmd->add_option("--in", report_in, "results CSV path")->required();
  report_cmd->add_option("--svg", report_svg_path, "chart path to write")
      ->required();

  try {
    app.parse(argc, argv);

    if (simulate->parsed()) {
      ExperimentConfig config;
      config.policies = parse_policy_list(policies_flag);
      config.n_casinos = casinos;
      config.budget = budget;
      config.repetitions = reps;
      config.seed = seed;
      config.pool_size = pool;
      config.arm_sigma = sigma;
      config.checkpoints = parse_checkpoints(checkpoints_flag);
      config.threads = threads;
      return run_simulate(config, out_csv, out_svg, out_json);
    }

    if (allocate->parsed()) {
      const auto policy = multibandit::parse_policy(policy_flag);
      if (!policy) {
        throw CLI::ValidationError("--policy",
                                   "unknown policy '" + policy_flag + "'");
      }
      AnnotationState state = load_state_or_exit_hints(state_path);
      multibandit::Rng rng(alloc_seed);
      const UnitAssignment assignment =
          next_unit(state, remaining_minutes, *policy, rng);
      if (assignment.kind != UnitAssignment::Kind::SessionDone) {
        multibandit::save_state(state, state_path);
      }
      std::cout << assignment_json(assignment).dump() << "\n";
      return kExitOk;
    }

    if (record->parsed()) {
      AnnotationState state = load_state_or_exit_hints(record_state);
      const UnitOutcome outcome = outcome_flag == "success"
                                      ? UnitOutcome::Success
                                      : UnitOutcome::Failure;
      record_unit_result(state, unit_id, outcome, minutes, external_ref);
      multibandit::save_state(state, record_state);
      const multibandit::UnitRecord* resolved = nullptr;
      for (const multibandit::UnitRecord& u : state.unit_log) {
        if (u.unit_id == unit_id) resolved = &u;
      }
      json out{{"unit_id", unit_id}, {"outcome", outcome_flag}};
      if (resolved != nullptr && resolved->description_id) {
        out["description_id"] = *resolved->description_id;
      }
      std::cout << out.dump() << "\n";
      return kExitOk;
    }

    if (import_cmd->parsed()) {
      const AnnotationState state = multibandit::import_log(log_path);
      multibandit::save_state(state, import_state);
      json out{{"tasks", state.tasks.size()},
               {"units", state.unit_log.size()}};
      std::cout << out.dump() << "\n";
      std::cerr << "imported " << state.unit_log.size() << " units across "
                << state.tasks.size() << " tasks into " << import_state
                << "\n";
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const auto data = multibandit::summarize_results_csv(report_in);
      const std::string svg = multibandit::render_whisker_svg(
          data, "mean regret from " + report_in);
      std::ofstream out(report_svg_path, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw multibandit::IoError(report_svg_path, "cannot open for writing");
      }
      out << svg;
      out.flush();
      if (!out) {
        throw multibandit::IoError(report_svg_path, "write failed");
      }
      std::cerr << "wrote " << report_svg_path << "\n";
      return kExitOk;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const multibandit::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitState;
  } catch (const multibandit::StateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitState;
  } catch (const multibandit::ImportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitState;
  } catch (const multibandit::EmptyWorld& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitState;
  } catch (const multibandit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const multibandit::Error& e) {
    // DomainError, PoolExhausted and friends: the configuration asked for
    // something the run cannot satisfy.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
