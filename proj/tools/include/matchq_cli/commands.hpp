#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "matchq_cli/config.hpp"

namespace matchq::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 1, kSolverFailure = 2, kCheckFailed = 3 };

/// One published row of the barrier table for the reference parameters.
struct TableRow {
  double p_s;
  double a_star;
  double b_star;
};

/// Published separatrix and barriers for p_b = 0.4 and p_s = 0.1, ..., 0.9.
const std::vector<TableRow>& reference_table();
constexpr double kReferenceC = -0.9440;
constexpr double kReferenceTolerance = 5e-3;

/// Runs the configured command, writing outputs under cfg.output_dir and a
/// human-readable summary to `log` (unless quiet). Returns an exit code.
int execute(const RunConfig& cfg, std::ostream& log, bool quiet);

/// Full command-line entry point: parses flags, loads the configuration and
/// dispatches. Errors are reported on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace matchq::cli
