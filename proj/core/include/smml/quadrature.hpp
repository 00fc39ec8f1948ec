#pragma once

#include "smml/family.hpp"

#include <cstddef>

namespace smml {

struct QuadratureOptions {
    double rel_tol = 1e-13;
    std::size_t max_subintervals = 20000;
};

/// Mass and centre of mass of the marginal on one interval, computed from the
/// scaled density r(x) / r(c) so that neither quantity underflows.
struct IntervalIntegrals {
    double log_mass = 0.0;         // log of the integral of r over the interval
    double centroid = 0.0;         // E[X | X in interval]
    double ref_point = 0.0;        // c: argmax of log_r on the closed interval
    double log_ref_density = 0.0;  // log r(c)
    double log_scaled_mass = 0.0;  // log of the integral of r(x)/r(c)
};

/// lo may be -inf and hi may be +inf. Throws ArgumentError if lo >= hi and
/// DomainError if the interval leaves the closure of the support.
IntervalIntegrals interval_integrals(const MarginalModel& marginal, double lo, double hi,
                                     const QuadratureOptions& opts = {});

/// r(x) / mass(lo, hi), evaluated as r~_c(x) / integral(r~_c).
double density_mass_ratio(const MarginalModel& marginal, double x, double lo, double hi,
                          const QuadratureOptions& opts = {});
double density_mass_ratio(const MarginalModel& marginal, double x,
                          const IntervalIntegrals& integrals);

/// E[g(X); lo < X < hi] for X ~ r. Used for the entropy and for the carrier
/// constant -E[log h(X)].
double marginal_expectation(const MarginalModel& marginal, const RealFn& g, double lo,
                            double hi, const QuadratureOptions& opts = {});

/// -integral of r log r over the support, in nats.
double differential_entropy(const MarginalModel& marginal, const QuadratureOptions& opts = {});

}  // namespace smml
