#include "smml/quadrature.hpp"

#include "smml/detail/gauss_kronrod.hpp"
#include "smml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smml {

namespace {

template <std::size_t K>
using Values = detail::Values<K>;

void check_interval(const MarginalModel& marginal, double lo, double hi) {
    if (!(lo < hi)) {
        throw ArgumentError("interval requires lo < hi (got [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "])");
    }
    if (lo < marginal.support_lo || hi > marginal.support_hi) {
        throw DomainError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] leaves the support of the marginal");
    }
}

// Integrates integrand(x, x - c, r(x)/r(c)) over [lo, hi]. The interval is
// split at c; unbounded pieces are mapped to [0, 1) by x = c +/- L t / (1 - t)
// with L the local length scale of r at c.
template <std::size_t K, class F>
detail::AdaptiveResult<K> scaled_integrate(const MarginalModel& marginal, double lo, double hi,
                                           double c, const F& integrand,
                                           const QuadratureOptions& opts) {
    const double log_rc = marginal.log_r(c);
    const auto weight = [&](double x) { return std::exp(marginal.log_r(x) - log_rc); };

    detail::AdaptiveResult<K> total;
    total.converged = true;
    const auto accumulate = [&](const detail::AdaptiveResult<K>& part) {
        for (std::size_t k = 0; k < K; ++k) {
            total.value[k] += part.value[k];
            total.abs_value[k] += part.abs_value[k];
            total.error[k] += part.error[k];
        }
        total.subintervals += part.subintervals;
        total.converged = total.converged && part.converged;
    };

    const auto piece = [&](double end) {
        if (end == c) return;
        const double sign = end > c ? 1.0 : -1.0;
        if (std::isfinite(end)) {
            const auto f = [&](double x) -> Values<K> {
                const double w = weight(x);
                if (w == 0.0) return Values<K>{};
                return integrand(x, x - c, w);
            };
            accumulate(detail::integrate_adaptive<K>(f, std::min(c, end), std::max(c, end),
                                                     opts.rel_tol, 0.0, opts.max_subintervals));
            return;
        }
        const double scale = marginal.local_scale(c);
        const auto f = [&](double t) -> Values<K> {
            const double u = 1.0 - t;
            const double d = sign * scale * t / u;
            const double x = c + d;
            const double w = weight(x);
            if (w == 0.0 || !std::isfinite(x)) return Values<K>{};
            Values<K> v = integrand(x, d, w);
            const double jac = scale / (u * u);
            for (auto& e : v) e *= jac;
            return v;
        };
        accumulate(detail::integrate_adaptive<K>(f, 0.0, 1.0, opts.rel_tol, 0.0,
                                                 opts.max_subintervals));
    };
    piece(lo);
    piece(hi);
    return total;
}

double reference_point(const MarginalModel& marginal, double lo, double hi) {
    return std::clamp(marginal.mode, lo, hi);
}

}  // namespace

IntervalIntegrals interval_integrals(const MarginalModel& marginal, double lo, double hi,
                                     const QuadratureOptions& opts) {
    check_interval(marginal, lo, hi);
    const double c = reference_point(marginal, lo, hi);
    const auto result = scaled_integrate<2>(
        marginal, lo, hi, c,
        [](double, double d, double w) { return Values<2>{w, d * w}; }, opts);

    IntervalIntegrals out;
    out.ref_point = c;
    out.log_ref_density = marginal.log_r(c);
    out.log_scaled_mass = std::log(result.value[0]);
    out.log_mass = out.log_ref_density + out.log_scaled_mass;
    out.centroid = c + result.value[1] / result.value[0];
    // Guard against the rounding of c + offset landing on an endpoint.
    out.centroid = std::clamp(out.centroid, lo, hi);
    return out;
}

double density_mass_ratio(const MarginalModel& marginal, double x,
                          const IntervalIntegrals& integrals) {
    return std::exp(marginal.log_r(x) - integrals.log_ref_density - integrals.log_scaled_mass);
}

double density_mass_ratio(const MarginalModel& marginal, double x, double lo, double hi,
                          const QuadratureOptions& opts) {
    if (!(x >= marginal.support_lo && x <= marginal.support_hi) || !std::isfinite(x)) {
        throw DomainError("x = " + std::to_string(x) + " is outside the support");
    }
    return density_mass_ratio(marginal, x, interval_integrals(marginal, lo, hi, opts));
}

double marginal_expectation(const MarginalModel& marginal, const RealFn& g, double lo,
                            double hi, const QuadratureOptions& opts) {
    check_interval(marginal, lo, hi);
    const double c = reference_point(marginal, lo, hi);
    const auto result = scaled_integrate<1>(
        marginal, lo, hi, c, [&](double x, double, double w) { return Values<1>{w * g(x)}; },
        opts);
    return std::exp(marginal.log_r(c)) * result.value[0];
}

double differential_entropy(const MarginalModel& marginal, const QuadratureOptions& opts) {
    const auto& log_r = marginal.log_r;
    return marginal_expectation(
        marginal, [&](double x) { return -log_r(x); }, marginal.support_lo, marginal.support_hi,
        opts);
}

}  // namespace smml
