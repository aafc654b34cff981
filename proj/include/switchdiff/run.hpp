#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "switchdiff/config.hpp"
#include "switchdiff/path.hpp"
#include "switchdiff/skeleton.hpp"
#include "switchdiff/verify.hpp"

namespace switchdiff {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitBoundViolated = 3;

struct RunResult {
    std::vector<BoundReport> rows;
    std::optional<Skeleton> skeleton;      // skeleton command
    std::optional<Trajectory> trajectory;  // simulate command
};

/// Runs the command without touching the file system. `out` receives the check summary.
RunResult execute(const RunSpec& spec, const ValidatedModel& model, std::ostream& out);

/// Header `quantity,analytic,estimate,se,ci_low,ci_high,z,verdict`.
void write_report_csv(std::ostream& os, const std::vector<BoundReport>& rows);
/// Same columns plus n_samples, kind and note.
void write_report_json(std::ostream& os, const std::vector<BoundReport>& rows);

/// Runs the command, writes report.{csv,json} and meta.json (plus skeleton.csv or
/// trajectory.csv for those commands) into spec.output.dir and returns the exit code.
/// Errors are reported on `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace switchdiff
