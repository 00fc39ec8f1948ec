#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace smml {

/// n x n tridiagonal matrix. Entries with |row - col| > 1 are zero by
/// representation.
class Tridiagonal {
public:
    Tridiagonal() = default;
    explicit Tridiagonal(std::size_t n) : lower_(n ? n - 1 : 0), diag_(n), upper_(n ? n - 1 : 0) {}

    std::size_t size() const { return diag_.size(); }

    double& diag(std::size_t j) { return diag_[j]; }
    double diag(std::size_t j) const { return diag_[j]; }
    /// Entry (j + 1, j).
    double& lower(std::size_t j) { return lower_[j]; }
    double lower(std::size_t j) const { return lower_[j]; }
    /// Entry (j, j + 1).
    double& upper(std::size_t j) { return upper_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }

    double at(std::size_t row, std::size_t col) const;

    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::vector<double> lower_;
    std::vector<double> diag_;
    std::vector<double> upper_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting (the
/// LAPACK gtsv scheme). Returns nullopt if a pivot vanishes.
std::optional<std::vector<double>> solve_tridiagonal(const Tridiagonal& a,
                                                     std::span<const double> b);

/// Number of negative, zero and positive eigenvalues of a symmetric
/// tridiagonal matrix given by its diagonal and off-diagonal, via the
/// LDL^T recurrence and Sylvester's law of inertia.
struct Inertia {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;
};
Inertia symmetric_tridiagonal_inertia(std::span<const double> diag,
                                      std::span<const double> offdiag);

}  // namespace smml
