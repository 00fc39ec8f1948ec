#pragma once

#include "smml/family.hpp"
#include "smml/quadrature.hpp"
#include "smml/tridiagonal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace smml {

/// A family together with its marginal and the two model constants every
/// code-length evaluation needs. Immutable after construction.
class Model {
public:
    Model(FamilyModel family, MarginalModel marginal, QuadratureOptions quad = {});
    explicit Model(ModelPair pair, QuadratureOptions quad = {})
        : Model(std::move(pair.first), std::move(pair.second), quad) {}

    const FamilyModel& family() const { return family_; }
    const MarginalModel& marginal() const { return marginal_; }
    const QuadratureOptions& quadrature() const { return quad_; }

    /// C = -E[log h(X)], X ~ r.
    double carrier_constant() const { return carrier_constant_; }
    /// I0 = -E[log r(X)], the expected length of the optimal one-part code.
    double marginal_entropy() const { return marginal_entropy_; }

private:
    FamilyModel family_;
    MarginalModel marginal_;
    QuadratureOptions quad_;
    double carrier_constant_ = 0.0;
    double marginal_entropy_ = 0.0;
};

/// Strictly increasing, finite cut-points a_1 < ... < a_n with n >= 1.
/// Interior-to-support is checked against a model where one is at hand.
class CutPointVector {
public:
    CutPointVector() = default;
    explicit CutPointVector(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    std::span<const double> points() const { return points_; }
    const std::vector<double>& values() const { return points_; }

    bool interior_to(double lo, double hi) const {
        return points_.front() > lo && points_.back() < hi;
    }

    /// Strictly increasing, finite and inside (lo, hi).
    static bool admissible(std::span<const double> points, double lo, double hi);

private:
    std::vector<double> points_;
};

/// Cut-points with the optimal coding probabilities and assertions for the
/// intervals U_i = [a_i, a_{i+1}), i = 0..n, where a_0 and a_{n+1} are the
/// support boundaries.
struct CodeBook {
    CutPointVector cuts;
    std::vector<double> bounds;     // n + 2 entries: a_0, a_1, ..., a_{n+1}
    std::vector<double> log_q;      // n + 1
    std::vector<double> theta_hat;  // n + 1
    std::vector<double> centroids;  // mu(theta_hat_i)
    std::vector<double> log_r_at_cuts;  // log r(a_j), j = 1..n

    std::size_t size() const { return cuts.size(); }
    std::size_t interval_of(double x) const;
};

CodeBook codebook_from_cutpoints(const Model& model, const CutPointVector& cuts);

/// Expected two-part code length I1 in nats.
double message_length_I1(const Model& model, const CodeBook& codebook);

/// G_j = log(q_j f(a_j | theta_j)) - log(q_{j-1} f(a_j | theta_{j-1})); the
/// gradient of I1 is r(a_j) G_j.
std::vector<double> gradient_G(const Model& model, const CodeBook& codebook);

/// Tridiagonal Jacobian of G.
Tridiagonal jacobian_G(const Model& model, const CodeBook& codebook);

/// Jump of log(q(x) f(x | theta(x))) across each cut-point, computed from the
/// two-part code density directly. Agrees with |G| algebraically, which is
/// checked on every call.
std::vector<double> continuity_gaps(const Model& model, const CodeBook& codebook);

struct CurveSample {
    double x = 0.0;
    double d0 = 0.0;  // -r log r
    double d1 = 0.0;  // -r log(q(x) f(x | theta(x)))
    double r = 0.0;
};

/// count equally spaced samples on [x_lo, x_hi] of the integrands of I0 and
/// I1 and of r itself.
std::vector<CurveSample> curve_samples(const Model& model, const CodeBook& codebook, double x_lo,
                                       double x_hi, std::size_t count);

}  // namespace smml
