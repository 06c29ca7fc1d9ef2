#include "reshape/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace reshape {

namespace {

void require_finite(std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("DenseMatrix: non-finite entry at flat index " + std::to_string(i));
        }
    }
}

void require_shape(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("DenseMatrix: rows and cols must be positive");
    }
}

double dot(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void rotate(double* x, double* y, std::size_t n, double c, double s)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

// Column-major working copy of the tall orientation (len >= count).
struct TallColumns {
    std::size_t len = 0;    // length of each column
    std::size_t count = 0;  // number of columns
    bool transposed = false;
    std::vector<double> data;

    double* col(std::size_t j) { return data.data() + j * len; }
    const double* col(std::size_t j) const { return data.data() + j * len; }
};

TallColumns tall_columns(const DenseMatrix& a)
{
    TallColumns w;
    const auto src = a.entries();
    if (a.rows() >= a.cols()) {
        // columns of a
        w.len = a.rows();
        w.count = a.cols();
        w.data.resize(src.size());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) w.data[j * w.len + i] = src[i * a.cols() + j];
    } else {
        // columns of a^T are the rows of a, already contiguous
        w.len = a.cols();
        w.count = a.rows();
        w.transposed = true;
        w.data.assign(src.begin(), src.end());
    }
    return w;
}

// Hestenes one-sided Jacobi. On return the columns of w are mutually
// orthogonal (pairs above the null floor) and, when v is given, w = a_tall * v.
void hestenes_sweeps(TallColumns& w, std::vector<double>* v, double fro)
{
    const std::size_t n = w.count;
    const std::size_t m = w.len;
    const double rel_tol = static_cast<double>(std::max<std::size_t>(m, 1)) * std::numeric_limits<double>::epsilon();
    const double null_floor = 1e-12 * fro;
    const double null_floor_sq = null_floor * null_floor;

    std::vector<double> norm_sq(n);
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) norm_sq[j] = dot(w.col(j), w.col(j), m);

        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (norm_sq[p] <= null_floor_sq || norm_sq[q] <= null_floor_sq) continue;
                const double g = dot(w.col(p), w.col(q), m);
                if (std::abs(g) <= rel_tol * std::sqrt(norm_sq[p]) * std::sqrt(norm_sq[q])) continue;

                rotated = true;
                const double zeta = (norm_sq[q] - norm_sq[p]) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(w.col(p), w.col(q), m, c, s);
                norm_sq[p] = std::max(0.0, norm_sq[p] - t * g);
                norm_sq[q] = norm_sq[q] + t * g;
                if (v != nullptr) rotate(v->data() + p * n, v->data() + q * n, n, c, s);
            }
        }
        if (!rotated) return;
    }
    throw std::runtime_error("thin_svd: one-sided Jacobi did not converge within " +
                             std::to_string(kMaxJacobiSweeps) + " sweeps");
}

std::vector<std::size_t> descending_order(const std::vector<double>& sigma)
{
    std::vector<std::size_t> order(sigma.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
    return order;
}

// Fills columns flagged in `missing` with unit vectors orthogonal to all
// other columns of the column-major len x count basis.
void complete_orthonormal(std::vector<double>& basis, std::size_t len, std::size_t count,
                          const std::vector<bool>& missing)
{
    std::size_t next_seed = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (!missing[j]) continue;
        double* target = basis.data() + j * len;
        bool placed = false;
        while (!placed && next_seed < len) {
            std::fill(target, target + len, 0.0);
            target[next_seed++] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < count; ++k) {
                    if (k == j || (missing[k] && k > j)) continue;
                    const double* other = basis.data() + k * len;
                    const double proj = dot(other, target, len);
                    for (std::size_t i = 0; i < len; ++i) target[i] -= proj * other[i];
                }
            }
            const double nrm = std::sqrt(dot(target, target, len));
            if (nrm > 0.5) {
                for (std::size_t i = 0; i < len; ++i) target[i] /= nrm;
                placed = true;
            }
        }
        if (!placed) throw std::runtime_error("thin_svd: failed to complete orthonormal basis");
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols)
{
    require_shape(rows, cols);
    entries_.assign(rows * cols, 0.0);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    require_shape(rows, cols);
    if (entries_.size() != rows * cols) {
        throw std::invalid_argument("DenseMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                                    std::to_string(entries_.size()));
    }
    require_finite(entries_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
    require_shape(rows_, cols_);
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    require_finite(entries_);
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
    return id;
}

DenseMatrix DenseMatrix::transposed() const
{
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double ail = a(i, l);
            if (ail == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
        }
    }
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: shape mismatch");
    DenseMatrix c = a;
    auto out = c.entries();
    const auto rhs = b.entries();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= rhs[i];
    return c;
}

double frobenius_norm_sq(const DenseMatrix& a)
{
    double s = 0.0;
    for (double x : a.entries()) s += x * x;
    return s;
}

double frobenius_norm(const DenseMatrix& a)
{
    return std::sqrt(frobenius_norm_sq(a));
}

SvdFactorization thin_svd(const DenseMatrix& a)
{
    TallColumns w = tall_columns(a);
    const std::size_t n = w.count;
    const std::size_t m = w.len;
    const double fro = frobenius_norm(a);

    std::vector<double> v(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;
    hestenes_sweeps(w, &v, fro);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(w.col(j), w.col(j), m));
    const auto order = descending_order(norms);

    // Sorted left vectors (length m) and right vectors (length n), column-major.
    const double null_floor = 1e-12 * fro;
    std::vector<double> left(m * n, 0.0);
    std::vector<double> right(n * n);
    std::vector<double> sigma(n);
    std::vector<bool> missing(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        sigma[k] = norms[j];
        std::copy_n(v.data() + j * n, n, right.data() + k * n);
        if (norms[j] > null_floor && norms[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) left[k * m + i] = w.col(j)[i] / norms[j];
        } else {
            missing[k] = true;
        }
    }
    complete_orthonormal(left, m, n, missing);

    // left spans the long side; map back to (u, v) of the original orientation.
    DenseMatrix u(a.rows(), n);
    DenseMatrix vv(a.cols(), n);
    DenseMatrix& long_side = w.transposed ? vv : u;
    DenseMatrix& short_side = w.transposed ? u : vv;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < m; ++i) long_side(i, k) = left[k * m + i];
        for (std::size_t i = 0; i < n; ++i) short_side(i, k) = right[k * n + i];
    }
    return SvdFactorization{std::move(u), std::move(sigma), std::move(vv)};
}

std::vector<double> singular_values(const DenseMatrix& a)
{
    TallColumns w = tall_columns(a);
    hestenes_sweeps(w, nullptr, frobenius_norm(a));
    std::vector<double> sigma(w.count);
    for (std::size_t j = 0; j < w.count; ++j) sigma[j] = std::sqrt(dot(w.col(j), w.col(j), w.len));
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

DenseMatrix rank_k_approx(const SvdFactorization& f, std::size_t k)
{
    if (k < 1 || k > f.sigma.size()) {
        throw std::invalid_argument("rank_k_approx: k=" + std::to_string(k) + " outside [1, " +
                                    std::to_string(f.sigma.size()) + "]");
    }
    const std::size_t m = f.u.rows();
    const std::size_t n = f.v.rows();
    DenseMatrix y(m, n);
    for (std::size_t l = 0; l < k; ++l) {
        const double s = f.sigma[l];
        for (std::size_t i = 0; i < m; ++i) {
            const double su = s * f.u(i, l);
            if (su == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) y(i, j) += su * f.v(j, l);
        }
    }
    return y;
}

double relative_error(const DenseMatrix& a, const DenseMatrix& y)
{
    if (a.rows() != y.rows() || a.cols() != y.cols()) throw std::invalid_argument("relative_error: shape mismatch");
    const double base = frobenius_norm(a);
    if (base == 0.0) throw std::domain_error("relative_error: reference matrix has zero Frobenius norm");
    return frobenius_norm(a - y) / base;
}

std::size_t parameter_count(std::size_t m, std::size_t n, std::size_t k)
{
    if (m == 0 || n == 0 || k == 0) throw std::invalid_argument("parameter_count: m, n, k must be positive");
    return k * (m + n);
}

double tail_energy(std::span<const double> sigma, std::size_t k)
{
    double s = 0.0;
    for (std::size_t i = sigma.size(); i > k; --i) s += sigma[i - 1] * sigma[i - 1];
    return s;
}

ApproxReport approx_report(const DenseMatrix& a, const SvdFactorization& f, std::size_t k)
{
    const DenseMatrix y = rank_k_approx(f, k);
    ApproxReport r;
    r.rank = k;
    r.parameters = parameter_count(a.rows(), a.cols(), k);
    r.abs_error_sq = frobenius_norm_sq(a - y);
    const double base = frobenius_norm_sq(a);
    if (base == 0.0) throw std::domain_error("approx_report: input has zero Frobenius norm");
    r.rel_error = std::sqrt(r.abs_error_sq / base);
    return r;
}

}  // namespace reshape
