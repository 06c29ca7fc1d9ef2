#include "reshape/reorganize.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace reshape {

TiledUnfolding tile_to_columns(const DenseMatrix& a, std::size_t p, std::size_t q)
{
    if (p == 0 || q == 0 || a.rows() % p != 0 || a.cols() % q != 0) {
        throw std::invalid_argument("tile_to_columns: " + std::to_string(p) + "x" + std::to_string(q) +
                                    " tiles do not divide a " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " matrix");
    }
    const TileScheme scheme{p, q, a.rows() / p, a.cols() / q};
    DenseMatrix x(scheme.unfolded_rows(), scheme.unfolded_cols());
    for (std::size_t gc = 0; gc < scheme.grid_cols; ++gc) {
        for (std::size_t gr = 0; gr < scheme.grid_rows; ++gr) {
            const std::size_t tile = gc * scheme.grid_rows + gr;
            for (std::size_t tc = 0; tc < q; ++tc)
                for (std::size_t tr = 0; tr < p; ++tr) x(tc * p + tr, tile) = a(gr * p + tr, gc * q + tc);
        }
    }
    return {std::move(x), scheme};
}

DenseMatrix columns_to_tiles(const DenseMatrix& x, const TileScheme& scheme)
{
    if (x.rows() != scheme.unfolded_rows() || x.cols() != scheme.unfolded_cols()) {
        throw std::invalid_argument("columns_to_tiles: matrix shape does not match tile scheme");
    }
    const std::size_t p = scheme.tile_rows;
    const std::size_t q = scheme.tile_cols;
    DenseMatrix a(scheme.source_rows(), scheme.source_cols());
    for (std::size_t gc = 0; gc < scheme.grid_cols; ++gc) {
        for (std::size_t gr = 0; gr < scheme.grid_rows; ++gr) {
            const std::size_t tile = gc * scheme.grid_rows + gr;
            for (std::size_t tc = 0; tc < q; ++tc)
                for (std::size_t tr = 0; tr < p; ++tr) a(gr * p + tr, gc * q + tc) = x(tc * p + tr, tile);
        }
    }
    return a;
}

DenseMatrix stack_column_groups(const DenseMatrix& a, std::size_t g)
{
    if (g == 0 || a.cols() % g != 0) {
        throw std::invalid_argument("stack_column_groups: " + std::to_string(g) + " groups do not divide " +
                                    std::to_string(a.cols()) + " columns");
    }
    const std::size_t width = a.cols() / g;
    DenseMatrix b(a.rows() * g, width);
    for (std::size_t grp = 0; grp < g; ++grp)
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < width; ++j) b(grp * a.rows() + i, j) = a(i, grp * width + j);
    return b;
}

DenseMatrix unstack_column_groups(const DenseMatrix& b, std::size_t g)
{
    if (g == 0 || b.rows() % g != 0) {
        throw std::invalid_argument("unstack_column_groups: " + std::to_string(g) + " groups do not divide " +
                                    std::to_string(b.rows()) + " rows");
    }
    const std::size_t height = b.rows() / g;
    DenseMatrix a(height, b.cols() * g);
    for (std::size_t grp = 0; grp < g; ++grp)
        for (std::size_t i = 0; i < height; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) a(i, grp * b.cols() + j) = b(grp * height + i, j);
    return a;
}

DenseMatrix diag_to_columns(const DenseMatrix& x)
{
    if (x.rows() != x.cols()) throw std::invalid_argument("diag_to_columns: matrix must be square");
    const std::size_t n = x.rows();
    DenseMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) b(i, k) = x(i, (i + k) % n);
    return b;
}

DenseMatrix columns_to_diag(const DenseMatrix& b)
{
    if (b.rows() != b.cols()) throw std::invalid_argument("columns_to_diag: matrix must be square");
    const std::size_t n = b.rows();
    DenseMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) x(i, (i + k) % n) = b(i, k);
    return x;
}

DenseMatrix kronecker_product(const DenseMatrix& b, const DenseMatrix& c)
{
    DenseMatrix out(b.rows() * c.rows(), b.cols() * c.cols());
    for (std::size_t bi = 0; bi < b.rows(); ++bi)
        for (std::size_t bj = 0; bj < b.cols(); ++bj) {
            const double s = b(bi, bj);
            for (std::size_t ci = 0; ci < c.rows(); ++ci)
                for (std::size_t cj = 0; cj < c.cols(); ++cj)
                    out(bi * c.rows() + ci, bj * c.cols() + cj) = s * c(ci, cj);
        }
    return out;
}

std::vector<KroneckerTerm> ksvd_terms(const DenseMatrix& a, std::size_t p, std::size_t q, std::size_t r)
{
    const auto [x, scheme] = tile_to_columns(a, p, q);
    const std::size_t max_terms = std::min(scheme.unfolded_rows(), scheme.unfolded_cols());
    if (r < 1 || r > max_terms) {
        throw std::invalid_argument("ksvd_terms: r=" + std::to_string(r) + " outside [1, " +
                                    std::to_string(max_terms) + "]");
    }
    const SvdFactorization f = thin_svd(x);

    std::vector<KroneckerTerm> terms;
    terms.reserve(r);
    for (std::size_t j = 0; j < r; ++j) {
        DenseMatrix c(p, q);
        for (std::size_t tc = 0; tc < q; ++tc)
            for (std::size_t tr = 0; tr < p; ++tr) c(tr, tc) = f.sigma[j] * f.u(tc * p + tr, j);
        DenseMatrix b(scheme.grid_rows, scheme.grid_cols);
        for (std::size_t gc = 0; gc < scheme.grid_cols; ++gc)
            for (std::size_t gr = 0; gr < scheme.grid_rows; ++gr) b(gr, gc) = f.v(gc * scheme.grid_rows + gr, j);
        terms.push_back({std::move(b), std::move(c)});
    }
    return terms;
}

DenseMatrix sum_of_kronecker_terms(const std::vector<KroneckerTerm>& terms)
{
    if (terms.empty()) throw std::invalid_argument("sum_of_kronecker_terms: no terms");
    DenseMatrix total = kronecker_product(terms.front().b, terms.front().c);
    for (std::size_t j = 1; j < terms.size(); ++j) {
        const DenseMatrix term = kronecker_product(terms[j].b, terms[j].c);
        if (term.rows() != total.rows() || term.cols() != total.cols()) {
            throw std::invalid_argument("sum_of_kronecker_terms: terms have different shapes");
        }
        auto out = total.entries();
        const auto add = term.entries();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += add[i];
    }
    return total;
}

}  // namespace reshape
