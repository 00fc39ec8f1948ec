#pragma once

#include "smml/codebook.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smml {

enum class Classification { LocalMinimum, SaddleOrIndefinite, NotCritical };

std::string_view to_string(Classification c);

struct SolveOptions {
    double tolerance = 1e-12;  // on max_j |G_j|
    std::size_t max_iterations = 200;
    std::size_t max_backtracks = 30;
    double critical_threshold = 1e-8;

    // multi-start
    std::size_t extra_starts = 8;
    std::uint64_t seed = 20240611;
    double perturbation = 0.2;  // relative, in probability space
    std::vector<double> stretch_powers = {2.0, 4.0, 8.0};
    double dedup_tolerance = 1e-6;  // relative to max(1, |a_i|)
    double tie_tolerance = 1e-11;   // I1 differences below this are ties
    bool keep_non_minima = false;
    std::vector<std::vector<double>> warm_starts;
    std::size_t threads = 1;

    // sweep continuation: starts for n are also built from the best
    // solutions found for n - 1
    bool continuation = true;
    std::size_t continuation_parents = 2;
};

struct IterationRecord {
    std::size_t iteration = 0;
    double grad_norm = 0.0;
    double step_scale = 0.0;  // accepted damping factor
};

struct SolveReport {
    CodeBook codebook;
    double I1 = 0.0;
    double I0 = 0.0;
    double gap = 0.0;  // I1 - I0
    bool converged = false;
    std::size_t iterations = 0;
    double final_grad_norm = 0.0;
    Classification classification = Classification::NotCritical;
    std::vector<double> continuity_gaps;
    std::vector<IterationRecord> trace;
    std::string diagnostic;
};

/// Damped Newton iteration on G = 0. Each step solves J d = -G and halves the
/// step until the candidate stays ordered inside the support and max|G|
/// decreases. Failure to converge is reported, not thrown.
SolveReport newton_solve(const Model& model, const CutPointVector& initial,
                         const SolveOptions& opts = {});

/// At a critical point the Hessian of I1 is diag(r(a)) J_G. Its definiteness
/// is read off the symmetric similarity transform D^{1/2} J D^{-1/2},
/// D = diag(r(a)), whose entries stay finite when r(a_j) underflows.
Classification classify_critical_point(const Model& model, const CodeBook& codebook,
                                       double grad_norm, double threshold = 1e-8);

/// a_i = R^{-1}(i / (n + 1)).
std::vector<double> quantile_start(const Model& model, std::size_t n);

/// Runs newton_solve from the quantile start, from opts.extra_starts seeded
/// perturbations of it, from tail-stretched variants of it (one pair per
/// entry of opts.stretch_powers) and from opts.warm_starts. Returns converged
/// solutions (local minima only unless opts.keep_non_minima), deduplicated
/// and sorted by I1. Near-equal I1 values (opts.tie_tolerance) are ranked
/// by the largest smallest coding probability, then lexicographically. The
/// result does not depend on opts.threads.
std::vector<SolveReport> multi_start_solve(const Model& model, std::size_t n,
                                           const SolveOptions& opts = {});

/// Start configurations for n + 1 cut-points derived from a solution with n:
/// one new cut-point beyond either end (geometric and arithmetic
/// extrapolation of the outer spacing) and one in every gap.
std::vector<std::vector<double>> extension_starts(const Model& model,
                                                  std::span<const double> parent);

struct SweepEntry {
    std::size_t n = 0;
    std::vector<SolveReport> solutions;  // best first; may be empty
};

/// multi_start_solve for n = n_min..n_max. With opts.continuation every n
/// from 1 upward is solved so that each level can seed the next.
std::vector<SweepEntry> sweep_solve(const Model& model, std::size_t n_min, std::size_t n_max,
                                    const SolveOptions& opts = {});

}  // namespace smml
