#pragma once

#include "smml/solver.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace smml::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::size_t random_configs = 20;
    std::size_t n_max = 6;
    bool symmetric = false;  // marginal symmetric about 0
    SolveOptions solve;
};

/// Random admissible cut-points: n in [1, 6], uniform on [-6, 6] for a
/// two-sided support, log-uniform on [0.05, 50] for a half-line.
std::vector<double> random_cutpoints(const Model& model, std::mt19937_64& rng);

/// Centered difference of I1 in each coordinate, step 1e-5 max(1, |a_j|).
std::vector<double> fd_gradient_I1(const Model& model, const std::vector<double>& a);

/// Centered difference of G; entry (j, k) of the dense result is dG_j/da_k.
std::vector<std::vector<double>> fd_jacobian_G(const Model& model, const std::vector<double>& a);

std::vector<CheckResult> run_checks(const Model& model, const VerifyOptions& opts);

}  // namespace smml::cli
