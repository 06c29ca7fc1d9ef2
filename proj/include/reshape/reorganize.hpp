#pragma once

#include <cstddef>
#include <vector>

#include "reshape/matrix.hpp"

namespace reshape {

/// Ties a (tile_rows * grid_rows) x (tile_cols * grid_cols) source matrix to
/// its (tile_rows * tile_cols) x (grid_rows * grid_cols) tiled unfolding.
///
/// Tiles are numbered column-major over the grid (down the first grid column,
/// then the next), and each tile is vectorized column-major.
struct TileScheme {
    std::size_t tile_rows = 1;
    std::size_t tile_cols = 1;
    std::size_t grid_rows = 1;
    std::size_t grid_cols = 1;

    std::size_t source_rows() const noexcept { return tile_rows * grid_rows; }
    std::size_t source_cols() const noexcept { return tile_cols * grid_cols; }
    std::size_t unfolded_rows() const noexcept { return tile_rows * tile_cols; }
    std::size_t unfolded_cols() const noexcept { return grid_rows * grid_cols; }

    bool operator==(const TileScheme&) const = default;
};

/// One term B (grid_rows x grid_cols) kron C (tile_rows x tile_cols).
struct KroneckerTerm {
    DenseMatrix b;
    DenseMatrix c;
};

struct TiledUnfolding {
    DenseMatrix matrix;
    TileScheme scheme;
};

/// Places every p x q tile of `a`, vectorized, as one column.
/// Throws std::invalid_argument unless p | rows and q | cols.
TiledUnfolding tile_to_columns(const DenseMatrix& a, std::size_t p, std::size_t q);

/// Exact inverse of tile_to_columns.
DenseMatrix columns_to_tiles(const DenseMatrix& x, const TileScheme& scheme);

/// [G1 G2 ... Gg] -> [G1; G2; ...; Gg] for g consecutive column groups.
DenseMatrix stack_column_groups(const DenseMatrix& a, std::size_t g);

/// Inverse of stack_column_groups.
DenseMatrix unstack_column_groups(const DenseMatrix& b, std::size_t g);

/// Wrap-around diagonal layout: out(i, k) = x(i, (i + k) mod n). Column 0 of
/// the result is diag(x).
DenseMatrix diag_to_columns(const DenseMatrix& x);

/// Inverse of diag_to_columns.
DenseMatrix columns_to_diag(const DenseMatrix& b);

DenseMatrix kronecker_product(const DenseMatrix& b, const DenseMatrix& c);

/// Kronecker-product SVD terms read off the SVD of the tiled unfolding.
///
/// Term j carries vec(C_j) = sigma_j u_j and B_j laid out from column j of V
/// in the same column-major grid order as the tiles, so
/// sum_j B_j kron C_j equals the tiled rank-r reconstruction folded back.
std::vector<KroneckerTerm> ksvd_terms(const DenseMatrix& a, std::size_t p, std::size_t q, std::size_t r);

/// sum_j terms[j].b kron terms[j].c; throws on empty input or mixed shapes.
DenseMatrix sum_of_kronecker_terms(const std::vector<KroneckerTerm>& terms);

}  // namespace reshape
