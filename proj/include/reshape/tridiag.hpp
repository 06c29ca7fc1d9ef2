#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reshape/matrix.hpp"

namespace reshape::tridiag {

/// Parameters of the tridiagonal family A = L U with L unit lower bidiagonal
/// (alpha below the diagonal) and U upper bidiagonal (gamma on the diagonal,
/// beta * gamma above it). Requires |alpha| < 1, |beta| < 1, gamma > 0.
struct TridiagParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    std::size_t n = 1;

    double delta() const noexcept { return alpha * beta; }
};

/// Throws std::invalid_argument when the family hypotheses do not hold.
void validate(const TridiagParams& p);

struct BidiagonalFactors {
    DenseMatrix lower;
    DenseMatrix upper;
};

/// Per-size certification record for X = A^{-1} and its diagonal
/// reorganization B.
struct TheoryReport {
    std::size_t n = 0;
    double sigma1_x = 0.0;
    double spectral_bound = 0.0;    // stands in for the n-independent constant omega_X
    double x_rank1_err_sq = 0.0;
    double b_rank1_err_sq = 0.0;
    double frob_sq = 0.0;           // ||X||_F^2 (= ||B||_F^2)
    double tn_over_gamma_sq = 0.0;  // energy of diag(X)
    double delta = 0.0;
    double omega1 = 0.0;
    double omega2_n = 0.0;
};

/// Below this distance from 1, delta is treated with the summation branch.
inline constexpr double kNearOneDelta = 1e-8;

BidiagonalFactors build_bidiagonal_factors(const TridiagParams& p);
DenseMatrix assemble_tridiagonal(const TridiagParams& p);

/// S_i = 1 + delta + ... + delta^{i-1}.
double partial_geometric_sum(double delta, std::size_t i);

/// Entry formula for A^{-1}:
/// (1/gamma) (-alpha)^{max(i-j,0)} (-beta)^{max(j-i,0)} S_{n-max(i,j)+1}.
DenseMatrix closed_form_inverse(const TridiagParams& p);

/// L^{-1} from the geometric (Neumann) series: (-alpha)^{i-j} on and below
/// the diagonal.
DenseMatrix lower_factor_inverse(const TridiagParams& p);

/// U^{-1} = (1/gamma) (-beta)^{j-i} on and above the diagonal.
DenseMatrix upper_factor_inverse(const TridiagParams& p);

/// Gershgorin-based bound on ||A^{-1}||_2; independent of n.
double spectral_norm_bound(const TridiagParams& p);

/// T_n = sum_{i=1}^n S_i^2 in closed form.
double tn_closed_form(const TridiagParams& p);

/// 1 / (gamma^2 (1 - delta)^2), the linear growth rate of T_n / gamma^2.
double omega1(const TridiagParams& p);

/// T_n / gamma^2 - omega1 * n.
double omega2(const TridiagParams& p);

/// Builds X and B, truncates both to rank 1, and fills the report.
/// Requires n >= 2. Propagates SVD failures.
TheoryReport certify_theorem(const TridiagParams& p);

/// Names of the certified relations that fail for `r` (empty when all hold).
std::vector<std::string> theory_violations(const TheoryReport& r);

struct SweepAnalysis {
    /// Smallest swept n from which on B's rank-1 error stays below X's.
    std::optional<std::size_t> crossing_n;
    /// x_err - b_err strictly increasing over the swept sizes past the crossing.
    bool gap_increasing = false;
    /// |omega2(n+2) - omega2(n+1)| / |omega2(n+1) - omega2(n)| over
    /// consecutive swept sizes whose increments are resolvable in double.
    std::vector<double> omega2_increment_ratios;
};

/// Reports must be sorted by n.
SweepAnalysis analyze_sweep(const std::vector<TheoryReport>& reports);

}  // namespace reshape::tridiag
