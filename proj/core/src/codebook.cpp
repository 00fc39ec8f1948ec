#include "smml/codebook.hpp"

#include "smml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smml {

Model::Model(FamilyModel family, MarginalModel marginal, QuadratureOptions quad)
    : family_(std::move(family)), marginal_(std::move(marginal)), quad_(quad) {
    const auto& log_h = family_.log_h;
    carrier_constant_ = marginal_expectation(
        marginal_, [&](double x) { return -log_h(x); }, family_.support_lo, family_.support_hi,
        quad_);
    marginal_entropy_ = differential_entropy(marginal_, quad_);
}

CutPointVector::CutPointVector(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw ArgumentError("at least one cut-point is required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) {
            throw ArgumentError("cut-point " + std::to_string(i + 1) + " is not finite");
        }
        if (i > 0 && !(points_[i - 1] < points_[i])) {
            throw ArgumentError("cut-points must be strictly increasing (a_" + std::to_string(i) +
                                " >= a_" + std::to_string(i + 1) + ")");
        }
    }
}

bool CutPointVector::admissible(std::span<const double> points, double lo, double hi) {
    if (points.empty()) return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i]) || !(points[i] > lo && points[i] < hi)) return false;
        if (i > 0 && !(points[i - 1] < points[i])) return false;
    }
    return true;
}

std::size_t CodeBook::interval_of(double x) const {
    const auto pts = cuts.points();
    return static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), x) - pts.begin());
}

CodeBook codebook_from_cutpoints(const Model& model, const CutPointVector& cuts) {
    const auto& family = model.family();
    const auto& marginal = model.marginal();
    if (cuts.size() == 0) throw ArgumentError("at least one cut-point is required");
    if (!cuts.interior_to(family.support_lo, family.support_hi)) {
        throw DomainError("cut-points must lie strictly inside the data support");
    }

    const std::size_t n = cuts.size();
    CodeBook book;
    book.cuts = cuts;
    book.bounds.reserve(n + 2);
    book.bounds.push_back(family.support_lo);
    for (double a : cuts.points()) book.bounds.push_back(a);
    book.bounds.push_back(family.support_hi);

    book.log_q.resize(n + 1);
    book.theta_hat.resize(n + 1);
    book.centroids.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const auto ints =
            interval_integrals(marginal, book.bounds[i], book.bounds[i + 1], model.quadrature());
        book.log_q[i] = ints.log_mass;
        book.centroids[i] = ints.centroid;
        book.theta_hat[i] = family.mean_to_natural(ints.centroid);
    }
    book.log_r_at_cuts.resize(n);
    for (std::size_t j = 0; j < n; ++j) book.log_r_at_cuts[j] = marginal.log_r(cuts[j]);
    return book;
}

double message_length_I1(const Model& model, const CodeBook& book) {
    const auto& psi = model.family().psi;
    double sum = 0.0;
    for (std::size_t i = 0; i < book.log_q.size(); ++i) {
        const double q = std::exp(book.log_q[i]);
        if (q == 0.0) continue;
        const double t = book.theta_hat[i];
        sum += q * (book.log_q[i] + t * book.centroids[i] - psi(t));
    }
    return model.carrier_constant() - sum;
}

namespace {

// log q_i + x theta_i - psi(theta_i): the x-dependent part of
// log(q_i f(x | theta_i)) without log h(x).
double code_exponent(const Model& model, const CodeBook& book, std::size_t i, double x) {
    const double t = book.theta_hat[i];
    return book.log_q[i] + x * t - model.family().psi(t);
}

// r(x) / q_i without forming either quantity.
double ratio(const CodeBook& book, double log_r_x, std::size_t i) {
    return std::exp(log_r_x - book.log_q[i]);
}

}  // namespace

std::vector<double> gradient_G(const Model& model, const CodeBook& book) {
    const std::size_t n = book.size();
    const auto& family = model.family();
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = book.cuts[j];
        const double t1 = book.theta_hat[j + 1];
        const double t0 = book.theta_hat[j];
        // Grouped by differences so that large, nearly equal terms cancel
        // before they are added.
        g[j] = (book.log_q[j + 1] - book.log_q[j]) + (a * (t1 - t0) - family.psi_delta(t1, t0));
    }
    return g;
}

Tridiagonal jacobian_G(const Model& model, const CodeBook& book) {
    const auto& mu_prime = model.family().mu_prime;
    const std::size_t n = book.size();
    const auto& a = book.cuts;
    const auto& m = book.centroids;
    const auto& th = book.theta_hat;
    const auto& lr = book.log_r_at_cuts;

    Tridiagonal jac(n);
    for (std::size_t j = 0; j < n; ++j) {
        // Row j: interval j lies left of a_j, interval j + 1 right of it.
        const std::size_t left = j;
        const std::size_t right = j + 1;
        const double dr = a[j] - m[right];
        const double dl = a[j] - m[left];
        jac.diag(j) = th[right] - th[left] -
                      ratio(book, lr[j], right) * (1.0 + dr * dr / mu_prime(th[right])) -
                      ratio(book, lr[j], left) * (1.0 + dl * dl / mu_prime(th[left]));
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        // Both off-diagonal entries couple through the interval [a_k, a_{k+1}).
        const std::size_t mid = k + 1;
        const double cross = 1.0 + (a[k] - m[mid]) * (a[k + 1] - m[mid]) / mu_prime(th[mid]);
        jac.upper(k) = ratio(book, lr[k + 1], mid) * cross;
        jac.lower(k) = ratio(book, lr[k], mid) * cross;
    }
    return jac;
}

std::vector<double> continuity_gaps(const Model& model, const CodeBook& book) {
    const auto& family = model.family();
    const std::size_t n = book.size();
    const auto g = gradient_G(model, book);
    std::vector<double> gaps(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = book.cuts[j];
        const double log_h = family.log_h(a);
        const auto log_code = [&](std::size_t i) {
            const double t = book.theta_hat[i];
            return book.log_q[i] + (a * t - family.psi(t) + log_h);
        };
        const double above = log_code(j + 1);
        const double below = log_code(j);
        gaps[j] = std::abs(above - below);

        const double scale = std::max({1.0, std::abs(above), std::abs(below), std::abs(log_h)});
        if (std::abs(gaps[j] - std::abs(g[j])) > 1e-12 * scale) {
            throw std::logic_error("continuity gap at cut-point " + std::to_string(j + 1) +
                                   " disagrees with |G|");
        }
    }
    return gaps;
}

std::vector<CurveSample> curve_samples(const Model& model, const CodeBook& book, double x_lo,
                                       double x_hi, std::size_t count) {
    if (!(x_lo < x_hi)) throw ArgumentError("curve range requires x_lo < x_hi");
    if (count < 2) throw ArgumentError("curve sampling needs at least 2 points");
    const auto& family = model.family();
    const auto& marginal = model.marginal();

    std::vector<CurveSample> out(count);
    const double step = (x_hi - x_lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        CurveSample s;
        s.x = k + 1 == count ? x_hi : x_lo + step * static_cast<double>(k);
        if (family.in_support(s.x)) {
            const double lr = marginal.log_r(s.x);
            s.r = std::exp(lr);
            if (s.r > 0.0) {
                const std::size_t i = book.interval_of(s.x);
                s.d0 = -s.r * lr;
                s.d1 = -s.r * (code_exponent(model, book, i, s.x) + family.log_h(s.x));
            }
        }
        out[k] = s;
    }
    return out;
}

}  // namespace smml
