#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace smml {

using RealFn = std::function<double(double)>;

/// One-dimensional exponential family in natural form
///
///     f(x | theta) = exp(x * theta - psi(theta)) * h(x),
///
/// with data support (support_lo, support_hi) and natural parameter space
/// (theta_lo, theta_hi). Either bound may be infinite. The image of the mean
/// map is taken to be the open support interval.
struct FamilyModel {
    std::string name;
    double support_lo = 0.0;
    double support_hi = 0.0;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    RealFn psi;
    RealFn log_h;
    RealFn mu;
    RealFn mu_prime;
    RealFn mu_inverse;  // may be empty; mean_to_natural() then falls back to mu_inverse_numeric()
    /// psi(t1) - psi(t0) without cancellation; may be empty.
    std::function<double(double, double)> psi_difference;

    bool in_support(double x) const { return x > support_lo && x < support_hi; }
    bool in_theta(double t) const { return t > theta_lo && t < theta_hi; }

    double mean_to_natural(double m) const;
    double psi_delta(double t1, double t0) const {
        return psi_difference ? psi_difference(t1, t0) : psi(t1) - psi(t0);
    }
};

/// Marginal density of the data after integrating the parameter against the
/// prior, supplied in closed form.
struct MarginalModel {
    std::string name;
    double support_lo = 0.0;
    double support_hi = 0.0;
    RealFn log_r;
    RealFn cdf;
    RealFn quantile;
    /// Local length scale of r around x; sets the stretch of the change of
    /// variables used on unbounded intervals.
    RealFn local_scale;
    /// r is unimodal with its maximum here (may sit on the support boundary).
    double mode = 0.0;
    std::vector<double> prior_params;
};

using ModelPair = std::pair<FamilyModel, MarginalModel>;

/// N(theta, 1) data with a N(0, alpha^2) prior; the marginal is N(0, 1 + alpha^2).
ModelPair make_normal_normal(double alpha);

/// Exponential data (natural parameter = minus the rate) with a
/// Gamma(shape alpha, rate beta) prior on the rate; the marginal is Lomax.
/// Requires alpha > 1 so that the marginal has a first moment.
ModelPair make_exponential_gamma(double alpha, double beta);

/// Solves mu(theta) = m by safeguarded Newton iteration on mu' with a
/// bisection fallback. Throws DomainError when m is outside the support.
double mu_inverse_numeric(const FamilyModel& family, double m);

}  // namespace smml
