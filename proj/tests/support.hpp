#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "reshape/matrix.hpp"

namespace testsupport {

using reshape::DenseMatrix;

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, double lo = -1.0,
                                 double hi = 1.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseMatrix a(m, n);
    for (double& x : a.entries()) x = dist(rng);
    return a;
}

inline DenseMatrix worked_x1()
{
    return {{-3, -6, -9, -12, -15, -18}, {-2, -4, -6, -8, -10, -12}, {-1, -2, -3, -4, -5, -6},
            {1, 2, 3, 4, 5, 6},          {2, 4, 6, 8, 10, 12},       {3, 6, 9, 12, 15, 18}};
}

inline DenseMatrix worked_x2()
{
    return {{-3, 1, -12, 4}, {-2, 2, -8, 8},   {-1, 3, -4, 12}, {-6, 2, -15, 5}, {-4, 4, -10, 10},
            {-2, 6, -5, 15}, {-9, 3, -18, 6}, {-6, 6, -12, 12}, {-3, 9, -6, 18}};
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

inline double naive_frobenius(const DenseMatrix& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline double relative_diff(const DenseMatrix& a, const DenseMatrix& b)
{
    DenseMatrix d(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) d.entries()[i] = a.entries()[i] - b.entries()[i];
    const double ref = naive_frobenius(b);
    return ref == 0.0 ? naive_frobenius(d) : naive_frobenius(d) / ref;
}

/// m x k matrix with orthonormal columns (Gram-Schmidt, applied twice).
inline DenseMatrix random_orthonormal(std::mt19937_64& rng, std::size_t m, std::size_t k)
{
    DenseMatrix q = random_matrix(rng, m, k);
    for (std::size_t c = 0; c < k; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += q(i, p) * q(i, c);
                for (std::size_t i = 0; i < m; ++i) q(i, c) -= dot * q(i, p);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += q(i, c) * q(i, c);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < m; ++i) q(i, c) /= norm;
    }
    return q;
}

/// U diag(sigma) V^T with random orthonormal U, V.
inline DenseMatrix with_spectrum(std::mt19937_64& rng, std::size_t m, std::size_t n, const std::vector<double>& sigma)
{
    const std::size_t k = sigma.size();
    const DenseMatrix u = random_orthonormal(rng, m, k);
    const DenseMatrix v = random_orthonormal(rng, n, k);
    DenseMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += u(i, t) * sigma[t] * v(j, t);
            a(i, j) = s;
        }
    return a;
}

/// max |Q^T Q - I| over the columns of q.
inline double orthonormality_defect(const DenseMatrix& q)
{
    double worst = 0.0;
    for (std::size_t a = 0; a < q.cols(); ++a) {
        for (std::size_t b = a; b < q.cols(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < q.rows(); ++i) dot += q(i, a) * q(i, b);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

/// Gaussian elimination with partial pivoting, column by column against I.
inline DenseMatrix lu_inverse(const DenseMatrix& a)
{
    const std::size_t n = a.rows();
    std::vector<double> m(a.entries().begin(), a.entries().end());
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
        if (m[piv * n + k] == 0.0) throw std::runtime_error("singular");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
            std::swap(perm[k], perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            m[i * n + k] /= m[k * n + k];
            for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= m[i * n + k] * m[k * n + j];
        }
    }
    DenseMatrix inv(n, n);
    std::vector<double> x(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = perm[i] == c ? 1.0 : 0.0;
            for (std::size_t j = 0; j < i; ++j) s -= m[i * n + j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= m[i * n + j] * x[j];
            x[i] = s / m[i * n + i];
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, c) = x[i];
    }
    return inv;
}

/// Largest singular value by power iteration on A^T A.
inline double power_sigma1(const DenseMatrix& a, int iterations = 2000)
{
    std::vector<double> v(a.cols(), 1.0);
    std::vector<double> w(a.rows());
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
            w[i] = s;
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * w[i];
            v[j] = s;
            norm += s * s;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (double& x : v) x /= norm;
        sigma = std::sqrt(norm);
    }
    return sigma;
}

/// ||X2||_F^2 - sigma_1(X2)^2 for the worked example, by power iteration.
inline double worked_example_rank1_error()
{
    const DenseMatrix x2 = worked_x2();
    const double s1 = power_sigma1(x2, 500);
    const double f = naive_frobenius(x2);
    return f * f - s1 * s1;
}

}  // namespace testsupport
