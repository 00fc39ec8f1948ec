#include "smml/family.hpp"

#include "smml/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace smml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_log_pdf(double z) {
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

// Acklam's rational approximation (relative error ~1e-9), polished by Newton
// steps on the erfc-based CDF. Only called with p <= 0.5 so that the lower
// tail, where erfc is accurate, drives the refinement.
double std_normal_lower_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double z;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double s = q * q;
        z = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    }
    for (int k = 0; k < 3; ++k) {
        const double cdf = std_normal_cdf(z);
        if (cdf <= 0.0) break;
        const double step = (cdf - p) / std::exp(std_normal_log_pdf(z));
        if (!std::isfinite(step)) break;
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

double std_normal_quantile(double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    if (p <= 0.5) return std_normal_lower_quantile(p);
    return -std_normal_lower_quantile(1.0 - p);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double FamilyModel::mean_to_natural(double m) const {
    if (mu_inverse) return mu_inverse(m);
    return mu_inverse_numeric(*this, m);
}

ModelPair make_normal_normal(double alpha) {
    if (!finite_positive(alpha)) {
        throw ParameterError("alpha must be a finite positive number (got " +
                             std::to_string(alpha) + ")");
    }
    const double beta = std::sqrt(1.0 + alpha * alpha);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * beta * beta);

    FamilyModel family;
    family.name = "normal-normal";
    family.support_lo = -kInf;
    family.support_hi = kInf;
    family.theta_lo = -kInf;
    family.theta_hi = kInf;
    family.psi = [](double t) { return 0.5 * t * t; };
    family.log_h = [](double x) { return std_normal_log_pdf(x); };
    family.mu = [](double t) { return t; };
    family.mu_prime = [](double) { return 1.0; };
    family.mu_inverse = [](double m) { return m; };
    family.psi_difference = [](double t1, double t0) { return 0.5 * (t1 - t0) * (t1 + t0); };

    MarginalModel marginal;
    marginal.name = "normal";
    marginal.support_lo = -kInf;
    marginal.support_hi = kInf;
    marginal.log_r = [beta, log_norm](double x) {
        const double z = x / beta;
        return -0.5 * z * z + log_norm;
    };
    marginal.cdf = [beta](double x) { return std_normal_cdf(x / beta); };
    marginal.quantile = [beta](double p) { return beta * std_normal_quantile(p); };
    marginal.local_scale = [beta](double x) {
        // 1 / sqrt(dlog_r^2 + |d2log_r|)
        return beta * beta / std::sqrt(x * x + beta * beta);
    };
    marginal.mode = 0.0;
    marginal.prior_params = {alpha};
    return {std::move(family), std::move(marginal)};
}

ModelPair make_exponential_gamma(double alpha, double beta) {
    if (!std::isfinite(alpha) || !(alpha > 1.0)) {
        throw ParameterError(
            "alpha must exceed 1 so the marginal has a first moment; the estimator is "
            "not defined otherwise (got alpha=" +
            std::to_string(alpha) + ")");
    }
    if (!finite_positive(beta)) {
        throw ParameterError("beta must be a finite positive number (got " +
                             std::to_string(beta) + ")");
    }

    FamilyModel family;
    family.name = "exponential-gamma";
    family.support_lo = 0.0;
    family.support_hi = kInf;
    family.theta_lo = -kInf;
    family.theta_hi = 0.0;
    family.psi = [](double t) { return -std::log(-t); };
    family.log_h = [](double) { return 0.0; };
    family.mu = [](double t) { return -1.0 / t; };
    family.mu_prime = [](double t) { return 1.0 / (t * t); };
    family.mu_inverse = [](double m) { return -1.0 / m; };
    family.psi_difference = [](double t1, double t0) { return -std::log(t1 / t0); };

    MarginalModel marginal;
    marginal.name = "lomax";
    marginal.support_lo = 0.0;
    marginal.support_hi = kInf;
    const double log_scale = std::log(alpha / beta);
    marginal.log_r = [alpha, beta, log_scale](double x) {
        return log_scale - (alpha + 1.0) * std::log1p(x / beta);
    };
    marginal.cdf = [alpha, beta](double x) {
        if (x <= 0.0) return 0.0;
        return -std::expm1(-alpha * std::log1p(x / beta));
    };
    marginal.quantile = [alpha, beta](double p) {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return kInf;
        return beta * std::expm1(-std::log1p(-p) / alpha);
    };
    marginal.local_scale = [alpha, beta](double x) {
        const double k = alpha + 1.0;
        return (beta + std::max(x, 0.0)) / std::sqrt(k * k + k);
    };
    marginal.mode = 0.0;
    marginal.prior_params = {alpha, beta};
    return {std::move(family), std::move(marginal)};
}

double mu_inverse_numeric(const FamilyModel& family, double m) {
    if (!std::isfinite(m) || !family.in_support(m)) {
        throw DomainError("mean " + std::to_string(m) + " is outside the image of mu");
    }
    const double lo_bound = family.theta_lo;
    const double hi_bound = family.theta_hi;
    const bool lo_finite = std::isfinite(lo_bound);
    const bool hi_finite = std::isfinite(hi_bound);

    double start = 0.0;
    if (lo_finite && hi_finite) start = 0.5 * (lo_bound + hi_bound);
    else if (lo_finite) start = lo_bound + 1.0;
    else if (hi_finite) start = hi_bound - 1.0;

    const double tol = 1e-14 * std::abs(m);
    const auto residual = [&](double t) { return family.mu(t) - m; };

    // Bracket the root: mu is strictly increasing on Theta.
    double lo = start, hi = start;
    double f0 = residual(start);
    if (std::abs(f0) <= tol) return start;
    bool bracketed = false;
    for (int k = 0; k < 1100 && !bracketed; ++k) {
        const double step = std::ldexp(1.0, k);
        if (f0 < 0.0) {
            lo = hi;
            hi = hi_finite ? hi_bound - (hi_bound - start) * std::ldexp(1.0, -k - 1) : start + step;
            bracketed = residual(hi) > 0.0;
        } else {
            hi = lo;
            lo = lo_finite ? lo_bound + (start - lo_bound) * std::ldexp(1.0, -k - 1) : start - step;
            bracketed = residual(lo) < 0.0;
        }
    }
    if (!bracketed) {
        throw DomainError("could not bracket mu(theta) = " + std::to_string(m));
    }

    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double f = residual(theta);
        if (std::abs(f) <= tol) return theta;
        if (f < 0.0) lo = theta;
        else hi = theta;
        const double slope = family.mu_prime(theta);
        double next = theta - f / slope;
        if (!(slope > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);
        }
        if (next == theta || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(theta)) {
            return next;
        }
        theta = next;
    }
    return theta;
}

}  // namespace smml
