#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multibandit/core.hpp"
#include "multibandit/policies.hpp"
#include "multibandit/rng.hpp"

// Maps the bandit machinery onto crowdsourced annotation: tasks are
// casinos, task descriptions are arms, build attempts are observations.
// A participant session is budgeted in minutes; units are issued until
// the next unit's estimated duration no longer fits.

namespace multibandit {

struct DescriptionRecord {
  std::string description_id;
  std::string external_ref;  // where the description text lives; never stored here
  std::int64_t successes = 0;
  std::int64_t failures = 0;

  friend bool operator==(const DescriptionRecord&,
                         const DescriptionRecord&) = default;
};

struct TaskRecord {
  std::string task_id;
  std::vector<DescriptionRecord> descriptions;

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

enum class UnitKind { Describe, Build };
enum class UnitOutcome { Pending, Success, Failure };

struct UnitRecord {
  std::int64_t unit_id = 0;  // strictly increasing across the log
  UnitKind kind = UnitKind::Describe;
  std::string task_id;
  std::optional<std::string> description_id;  // Build units only
  UnitOutcome outcome = UnitOutcome::Pending;
  std::optional<double> minutes;

  friend bool operator==(const UnitRecord&, const UnitRecord&) = default;
};

struct AllocatorConfig {
  double session_minutes = 45.0;
  double describe_minutes = 9.0;  // current EWMA estimate
  double build_minutes = 7.0;     // current EWMA estimate
  double ewma_lambda = 0.2;
  bool describe_counts_as_build = true;

  friend bool operator==(const AllocatorConfig&,
                         const AllocatorConfig&) = default;
};

struct AnnotationState {
  AllocatorConfig config;
  std::vector<TaskRecord> tasks;
  std::vector<UnitRecord> unit_log;  // append-only

  friend bool operator==(const AnnotationState&,
                         const AnnotationState&) = default;
};

struct UnitAssignment {
  enum class Kind { Describe, Build, SessionDone };

  Kind kind = Kind::SessionDone;
  std::string task_id;
  std::string description_id;  // Build only
  std::int64_t unit_id = 0;    // 0 for SessionDone
  double estimated_minutes = 0.0;

  static UnitAssignment session_done() { return UnitAssignment{}; }
};

// The bandit view of the annotation state. Only descriptions that have at
// least one observation become arms; `arm_descriptions[i][j]` gives the
// description index behind casino i's arm j.
struct ProjectedWorld {
  WorldState world;
  std::vector<std::vector<std::size_t>> arm_descriptions;
};

ProjectedWorld project_world(const AnnotationState& state);

// Picks the next unit by running `policy` (cas-inf by default) on the
// projected world. Appends a Pending unit to the log unless the chosen
// kind's estimated duration exceeds the remaining minutes, in which case
// SessionDone is returned and nothing is logged. Throws EmptyWorld when
// no tasks are registered.
UnitAssignment next_unit(AnnotationState& state, double remaining_minutes,
                         PolicyKind policy, Rng& rng);
UnitAssignment next_unit(AnnotationState& state, double remaining_minutes);

// Resolves a Pending unit. A successful Describe creates the task's next
// description (counting as its first success when describe_counts_as_build
// is set); a failed Describe is logged and discarded; Build results
// increment the description's counters. The duration estimate for the
// unit's kind is EWMA-updated with the observed minutes either way.
// Throws StateError for an unknown or already-resolved unit.
void record_unit_result(AnnotationState& state, std::int64_t unit_id,
                        UnitOutcome outcome, double minutes,
                        const std::string& external_ref = "");

// JSON persistence. save_state writes atomically (temp file + rename);
// load_state validates the document and names the offending field in the
// SchemaError it throws.
void save_state(const AnnotationState& state, const std::string& path);
AnnotationState load_state(const std::string& path);

// Rebuilds a state by replaying a newline-delimited JSON observation log
// ({task_id, description_id, actor, outcome, minutes?} per line) through
// the record semantics above. Throws ImportError with the offending line
// number.
AnnotationState import_log(const std::string& path);

}  // namespace multibandit
