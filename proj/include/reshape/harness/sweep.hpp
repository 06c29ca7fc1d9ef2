#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "reshape/harness/image.hpp"
#include "reshape/matrix.hpp"

namespace reshape::harness {

enum class SweepMethod { plain_svd, tiled };

const char* to_string(SweepMethod m) noexcept;

/// Smallest truncation meeting a relative-error target.
struct RankForError {
    std::size_t rank = 0;
    std::size_t parameters = 0;
    double rel_error = 0.0;
};

struct SweepRecord {
    std::string image;
    SweepMethod method = SweepMethod::plain_svd;
    std::size_t tile_rows = 0;  // 0 for plain_svd
    std::size_t tile_cols = 0;
    std::size_t matrix_rows = 0;  // shape the SVD was taken of
    std::size_t matrix_cols = 0;
    double target_rel_error = 0.0;
    std::size_t achieved_rank = 0;
    std::size_t parameters = 0;
    double achieved_rel_error = 0.0;
    bool winner = false;
};

/// Square tile sizes 7, 11, ..., 43.
std::vector<std::size_t> default_tile_sizes();

/// Scans the singular-value tail sums of a matrix with squared Frobenius norm
/// `frob_sq` and shape rows x cols. Requires 0 < target < 1.
RankForError min_rank_for_error(std::span<const double> sigma, double frob_sq, std::size_t rows, std::size_t cols,
                                double target);
RankForError min_rank_for_error(const DenseMatrix& a, double target);

struct NamedImage {
    std::string name;
    GrayImage image;
};

/// For each image and target: one plain_svd record on the full image and one
/// tiled record per square tile size (center-cropped). The minimum-parameter
/// record per (image, target) carries winner = true; ties go to plain_svd,
/// then to the smaller tile. Records are ordered by image, then target, then
/// plain before tiled in tile-size order, independent of `threads`.
std::vector<SweepRecord> tile_sweep(std::span<const NamedImage> images, std::span<const std::size_t> tile_sizes,
                                    std::span<const double> targets, std::size_t threads = 1);

std::vector<SweepRecord> tile_sweep(const GrayImage& image, std::span<const std::size_t> tile_sizes,
                                    std::span<const double> targets, std::size_t threads = 1);

/// Fraction of images whose winner at `target` is a tiled record.
double tiled_win_fraction(std::span<const SweepRecord> records, double target);

}  // namespace reshape::harness
