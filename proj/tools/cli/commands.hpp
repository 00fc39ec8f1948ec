#pragma once

#include "cli/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace smml::cli {

/// Parses args (without the program name) and runs one subcommand:
/// solve, sweep, curves or verify. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_curves(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Cut-points as printed in tables. For a model whose marginal is symmetric
/// about 0 the solution is oriented to have at least as many non-negative
/// cut-points as negative ones and only the non-negative ones are kept,
/// unless `full` is set.
std::vector<double> table_cutpoints(const SolveReport& report, bool symmetric_model, bool full);

/// "%.17g" by default; fixed with `digits` decimals otherwise.
std::string format_number(double value, std::optional<int> digits);

}  // namespace smml::cli
