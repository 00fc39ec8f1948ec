#include "smml/tridiagonal.hpp"

#include "smml/errors.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace smml {

double Tridiagonal::at(std::size_t row, std::size_t col) const {
    if (row == col) return diag_[row];
    if (row + 1 == col) return upper_[row];
    if (col + 1 == row) return lower_[col];
    return 0.0;
}

std::vector<double> Tridiagonal::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = diag_[j] * x[j];
        if (j > 0) y[j] += lower_[j - 1] * x[j - 1];
        if (j + 1 < n) y[j] += upper_[j] * x[j + 1];
    }
    return y;
}

std::optional<std::vector<double>> solve_tridiagonal(const Tridiagonal& a,
                                                     std::span<const double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ArgumentError("right-hand side size does not match the matrix");
    if (n == 0) return std::vector<double>{};

    std::vector<double> dl(n > 1 ? n - 1 : 0), d(n), du(n > 1 ? n - 1 : 0), du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t j = 0; j < n; ++j) d[j] = a.diag(j);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        dl[j] = a.lower(j);
        du[j] = a.upper(j);
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) return std::nullopt;
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            x[i + 1] -= fact * x[i];
            if (i + 2 < n) du2[i] = 0.0;
        } else {
            // Swap rows i and i+1.
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = tmp;
            std::swap(x[i], x[i + 1]);
            x[i + 1] -= fact * x[i];
        }
    }
    if (d[n - 1] == 0.0) return std::nullopt;

    x[n - 1] /= d[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
        x[k] = (x[k] - du[k] * x[k + 1] - du2[k] * x[k + 2]) / d[k];
    }
    for (double v : x) {
        if (!std::isfinite(v)) return std::nullopt;
    }
    return x;
}

Inertia symmetric_tridiagonal_inertia(std::span<const double> diag,
                                      std::span<const double> offdiag) {
    if (!diag.empty() && offdiag.size() + 1 != diag.size()) {
        throw ArgumentError("off-diagonal must have one entry fewer than the diagonal");
    }
    constexpr double tiny = std::numeric_limits<double>::min();
    Inertia inertia;
    double prev = 1.0;
    for (std::size_t j = 0; j < diag.size(); ++j) {
        double pivot = diag[j];
        if (j > 0) pivot -= offdiag[j - 1] * offdiag[j - 1] / prev;
        if (pivot > 0.0) ++inertia.positive;
        else if (pivot < 0.0) ++inertia.negative;
        else ++inertia.zero;
        // A zero pivot is nudged so the recurrence can continue.
        prev = pivot == 0.0 ? tiny : pivot;
    }
    return inertia;
}

}  // namespace smml
