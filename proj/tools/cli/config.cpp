#include "cli/config.hpp"

#include <cmath>

namespace smml::cli {

std::optional<ConfigError> validate_model(const RunConfig& c) {
    if (c.model == "normal-normal") {
        if (!std::isfinite(c.alpha) || !(c.alpha > 0.0)) {
            return ConfigError{"--alpha", "alpha must be positive for normal-normal"};
        }
        return std::nullopt;
    }
    if (c.model == "exponential-gamma") {
        if (!std::isfinite(c.alpha) || !(c.alpha > 1.0)) {
            return ConfigError{"--alpha",
                               "alpha must satisfy alpha > 1 for exponential-gamma; for "
                               "alpha <= 1 the expected code length need not exist and the "
                               "estimator is not defined"};
        }
        if (!std::isfinite(c.beta) || !(c.beta > 0.0)) {
            return ConfigError{"--beta", "beta must be positive for exponential-gamma"};
        }
        return std::nullopt;
    }
    return ConfigError{"--model", "unknown model '" + c.model +
                                      "' (expected normal-normal or exponential-gamma)"};
}

Model build_model(const RunConfig& c) {
    if (c.model == "exponential-gamma") return Model(make_exponential_gamma(c.alpha, c.beta));
    return Model(make_normal_normal(c.alpha));
}

SolveOptions solve_options(const RunConfig& c) {
    SolveOptions o;
    o.tolerance = c.tolerance;
    o.max_iterations = c.max_iter;
    o.extra_starts = c.extra_starts;
    o.seed = c.seed;
    o.threads = c.threads;
    return o;
}

}  // namespace smml::cli
