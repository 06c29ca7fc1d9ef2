#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace reshape {

/// Dense real matrix, row-major, with explicit shape.
///
/// Constructors reject empty shapes and non-finite entries, so every
/// DenseMatrix that exists is a valid input to the routines below.
class DenseMatrix {
public:
    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }

    std::span<const double> entries() const noexcept { return entries_; }
    std::span<double> entries() noexcept { return entries_; }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// Thin SVD a = u * diag(sigma) * v^T with r = min(rows, cols).
struct SvdFactorization {
    DenseMatrix u;              // m x r, orthonormal columns
    std::vector<double> sigma;  // descending, nonnegative
    DenseMatrix v;              // n x r, orthonormal columns

    std::size_t rank_capacity() const noexcept { return sigma.size(); }
};

/// Error and storage accounting for one truncation.
struct ApproxReport {
    std::size_t rank = 0;
    std::size_t parameters = 0;
    double abs_error_sq = 0.0;  // squared Frobenius units
    double rel_error = 0.0;     // ||a - y||_F / ||a||_F
};

/// Maximum number of Jacobi sweeps before thin_svd gives up.
inline constexpr int kMaxJacobiSweeps = 60;

double frobenius_norm(const DenseMatrix& a);
double frobenius_norm_sq(const DenseMatrix& a);

/// One-sided (Hestenes) Jacobi SVD on the tall orientation of `a`.
///
/// Throws std::runtime_error when the sweep cap is reached without
/// convergence.
SvdFactorization thin_svd(const DenseMatrix& a);

/// Singular values only, descending. Same kernel as thin_svd without
/// accumulating the right rotations.
std::vector<double> singular_values(const DenseMatrix& a);

/// sum_{i<k} sigma_i u_i v_i^T. Throws std::invalid_argument unless
/// 1 <= k <= f.sigma.size().
DenseMatrix rank_k_approx(const SvdFactorization& f, std::size_t k);

/// ||a - y||_F / ||a||_F. Throws std::invalid_argument on shape mismatch and
/// std::domain_error when ||a||_F == 0.
double relative_error(const DenseMatrix& a, const DenseMatrix& y);

/// Storage of a rank-k factorization of an m x n matrix: k(m + n).
std::size_t parameter_count(std::size_t m, std::size_t n, std::size_t k);

/// Sum of sigma_i^2 for i >= k (0-based), accumulated smallest first.
double tail_energy(std::span<const double> sigma, std::size_t k);

/// Builds the report for the rank-k truncation of `a` by reconstructing it.
ApproxReport approx_report(const DenseMatrix& a, const SvdFactorization& f, std::size_t k);

}  // namespace reshape
