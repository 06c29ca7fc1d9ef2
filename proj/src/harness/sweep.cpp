#include "reshape/harness/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <thread>

#include "reshape/harness/parallel.hpp"
#include "reshape/reorganize.hpp"

namespace reshape::harness {

namespace {

struct Spectrum {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double frob_sq = 0.0;
    std::vector<double> sigma;
};

Spectrum spectrum_of(const DenseMatrix& m)
{
    return Spectrum{m.rows(), m.cols(), frobenius_norm_sq(m), singular_values(m)};
}

void check_target(double target)
{
    if (!(target > 0.0 && target < 1.0)) {
        throw std::invalid_argument("relative-error target must lie in (0, 1), got " + std::to_string(target));
    }
}

}  // namespace

std::size_t thread_budget()
{
    if (const char* env = std::getenv("RESHAPE_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

const char* to_string(SweepMethod m) noexcept
{
    return m == SweepMethod::plain_svd ? "plain_svd" : "tiled";
}

std::vector<std::size_t> default_tile_sizes()
{
    std::vector<std::size_t> sizes;
    for (std::size_t s = 7; s <= 43; s += 4) sizes.push_back(s);
    return sizes;
}

RankForError min_rank_for_error(std::span<const double> sigma, double frob_sq, std::size_t rows, std::size_t cols,
                                double target)
{
    check_target(target);
    if (sigma.empty()) throw std::invalid_argument("min_rank_for_error: empty spectrum");
    if (!(frob_sq > 0.0)) throw std::domain_error("min_rank_for_error: matrix has zero Frobenius norm");

    // tail[k] = sum_{i >= k} sigma_i^2, accumulated smallest first
    std::vector<double> tail(sigma.size() + 1, 0.0);
    for (std::size_t i = sigma.size(); i > 0; --i) tail[i - 1] = tail[i] + sigma[i - 1] * sigma[i - 1];

    for (std::size_t k = 1; k <= sigma.size(); ++k) {
        const double rel = std::sqrt(tail[k] / frob_sq);
        if (rel <= target) return RankForError{k, parameter_count(rows, cols, k), rel};
    }
    // tail[r] == 0, so the loop always returns
    throw std::logic_error("min_rank_for_error: full rank did not meet the target");
}

RankForError min_rank_for_error(const DenseMatrix& a, double target)
{
    const auto sigma = singular_values(a);
    return min_rank_for_error(sigma, frobenius_norm_sq(a), a.rows(), a.cols(), target);
}

std::vector<SweepRecord> tile_sweep(std::span<const NamedImage> images, std::span<const std::size_t> tile_sizes,
                                    std::span<const double> targets, std::size_t threads)
{
    if (images.empty() || tile_sizes.empty() || targets.empty()) {
        throw std::invalid_argument("tile_sweep: images, tile sizes and targets must be nonempty");
    }
    for (double t : targets) check_target(t);
    for (std::size_t s : tile_sizes)
        if (s == 0) throw std::invalid_argument("tile_sweep: tile size must be positive");

    const std::size_t per_image = 1 + tile_sizes.size();
    std::vector<Spectrum> spectra(images.size() * per_image);
    parallel_for(spectra.size(), threads, [&](std::size_t item) {
        const GrayImage& img = images[item / per_image].image;
        const std::size_t slot = item % per_image;
        if (slot == 0) {
            spectra[item] = spectrum_of(img.matrix);
            return;
        }
        const std::size_t s = tile_sizes[slot - 1];
        const GrayImage cropped = crop_to_tile_multiple(img, s, s);
        spectra[item] = spectrum_of(tile_to_columns(cropped.matrix, s, s).matrix);
    });

    std::vector<SweepRecord> records;
    records.reserve(images.size() * targets.size() * per_image);
    for (std::size_t im = 0; im < images.size(); ++im) {
        for (double target : targets) {
            const std::size_t first = records.size();
            for (std::size_t slot = 0; slot < per_image; ++slot) {
                const Spectrum& sp = spectra[im * per_image + slot];
                const RankForError best = min_rank_for_error(sp.sigma, sp.frob_sq, sp.rows, sp.cols, target);
                SweepRecord rec;
                rec.image = images[im].name;
                rec.method = slot == 0 ? SweepMethod::plain_svd : SweepMethod::tiled;
                rec.tile_rows = slot == 0 ? 0 : tile_sizes[slot - 1];
                rec.tile_cols = rec.tile_rows;
                rec.matrix_rows = sp.rows;
                rec.matrix_cols = sp.cols;
                rec.target_rel_error = target;
                rec.achieved_rank = best.rank;
                rec.parameters = best.parameters;
                rec.achieved_rel_error = best.rel_error;
                records.push_back(std::move(rec));
            }
            // strict '<' keeps the earliest record on ties: plain first, then smaller tiles
            std::size_t win = first;
            for (std::size_t i = first + 1; i < records.size(); ++i)
                if (records[i].parameters < records[win].parameters) win = i;
            records[win].winner = true;
        }
    }
    return records;
}

std::vector<SweepRecord> tile_sweep(const GrayImage& image, std::span<const std::size_t> tile_sizes,
                                    std::span<const double> targets, std::size_t threads)
{
    const NamedImage one{"image", image};
    return tile_sweep(std::span<const NamedImage>(&one, 1), tile_sizes, targets, threads);
}

double tiled_win_fraction(std::span<const SweepRecord> records, double target)
{
    std::set<std::string> seen;
    std::size_t tiled_wins = 0;
    for (const auto& r : records) {
        if (r.target_rel_error != target) continue;
        seen.insert(r.image);
        if (r.winner && r.method == SweepMethod::tiled) ++tiled_wins;
    }
    return seen.empty() ? 0.0 : static_cast<double>(tiled_wins) / static_cast<double>(seen.size());
}

}  // namespace reshape::harness
