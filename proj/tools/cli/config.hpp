#pragma once

#include "smml/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smml::cli {

enum class ExitCode : int { Success = 0, InvalidInput = 1, SolverFailure = 2 };

enum class OutputFormat { Csv, Text };

struct RunConfig {
    std::string model = "normal-normal";
    bool model_given = false;
    double alpha = 2.0;
    double beta = 1.0;
    std::size_t n = 6;
    std::size_t n_min = 1;
    std::size_t n_max = 6;
    double tolerance = 1e-12;
    std::size_t max_iter = 200;
    std::size_t extra_starts = 8;
    std::uint64_t seed = 20240611;
    std::size_t threads = 1;
    std::string out;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;
    bool bits = false;
    bool full_cuts = false;
    std::optional<int> digits;

    // curves
    double x_lo = -20.0;
    double x_hi = 25.0;
    std::size_t count = 2000;
    std::string cuts_out;
};

/// Thrown for configuration problems; `field` names the offending flag.
struct ConfigError {
    std::string field;
    std::string message;
};

/// Parameter checks mirroring the model factories. Returns the first problem.
std::optional<ConfigError> validate_model(const RunConfig& config);

Model build_model(const RunConfig& config);
SolveOptions solve_options(const RunConfig& config);

}  // namespace smml::cli
