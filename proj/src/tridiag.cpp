#include "reshape/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reshape/reorganize.hpp"

namespace reshape::tridiag {

namespace {

bool near_one(double delta)
{
    return std::abs(1.0 - delta) < kNearOneDelta;
}

// S_1 .. S_n (index 0 unused).
std::vector<double> partial_sums(double delta, std::size_t n)
{
    std::vector<double> s(n + 1, 0.0);
    if (near_one(delta)) {
        for (std::size_t i = 1; i <= n; ++i) s[i] = 1.0 + delta * s[i - 1];
    } else {
        for (std::size_t i = 1; i <= n; ++i)
            s[i] = (1.0 - std::pow(delta, static_cast<double>(i))) / (1.0 - delta);
    }
    return s;
}

double signed_power(double base, std::size_t k)
{
    return std::pow(base, static_cast<double>(k));
}

}  // namespace

void validate(const TridiagParams& p)
{
    if (!(std::abs(p.alpha) < 1.0) || !(std::abs(p.beta) < 1.0) || !(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
        throw std::invalid_argument("TridiagParams: require |alpha| < 1, |beta| < 1, gamma > 0");
    }
    if (p.n == 0) throw std::invalid_argument("TridiagParams: n must be positive");
}

BidiagonalFactors build_bidiagonal_factors(const TridiagParams& p)
{
    validate(p);
    DenseMatrix lower = DenseMatrix::identity(p.n);
    DenseMatrix upper(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        upper(i, i) = p.gamma;
        if (i + 1 < p.n) {
            lower(i + 1, i) = p.alpha;
            upper(i, i + 1) = p.beta * p.gamma;
        }
    }
    return {std::move(lower), std::move(upper)};
}

DenseMatrix assemble_tridiagonal(const TridiagParams& p)
{
    validate(p);
    DenseMatrix a(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        a(i, i) = i == 0 ? p.gamma : p.gamma * (1.0 + p.alpha * p.beta);
        if (i + 1 < p.n) {
            a(i + 1, i) = p.alpha * p.gamma;
            a(i, i + 1) = p.beta * p.gamma;
        }
    }
    return a;
}

double partial_geometric_sum(double delta, std::size_t i)
{
    return partial_sums(delta, i)[i];
}

DenseMatrix closed_form_inverse(const TridiagParams& p)
{
    validate(p);
    const std::size_t n = p.n;
    const auto s = partial_sums(p.delta(), n);
    DenseMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double off = i >= j ? signed_power(-p.alpha, i - j) : signed_power(-p.beta, j - i);
            // 1-based S_{n - max(i,j) + 1} with 0-based i, j
            x(i, j) = off * s[n - std::max(i, j)] / p.gamma;
        }
    }
    return x;
}

DenseMatrix lower_factor_inverse(const TridiagParams& p)
{
    validate(p);
    DenseMatrix li(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j <= i; ++j) li(i, j) = signed_power(-p.alpha, i - j);
    return li;
}

DenseMatrix upper_factor_inverse(const TridiagParams& p)
{
    validate(p);
    DenseMatrix ui(p.n, p.n);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = i; j < p.n; ++j) ui(i, j) = signed_power(-p.beta, j - i) / p.gamma;
    return ui;
}

double spectral_norm_bound(const TridiagParams& p)
{
    validate(p);
    const double a = p.alpha;
    const double b = p.beta;
    const double lower = (1.0 / (1.0 - a * a)) * (2.0 / (1.0 - std::abs(a)) - 1.0);
    const double inv_gamma = 1.0 / p.gamma;
    const double upper = (inv_gamma * inv_gamma / (1.0 - b * b)) * (2.0 / (1.0 - std::abs(b)) - 1.0);
    return std::sqrt(lower) * std::sqrt(upper);
}

double tn_closed_form(const TridiagParams& p)
{
    validate(p);
    const double d = p.delta();
    const double n = static_cast<double>(p.n);
    if (near_one(d)) {
        const auto s = partial_sums(d, p.n);
        double t = 0.0;
        for (std::size_t i = 1; i <= p.n; ++i) t += s[i] * s[i];
        return t;
    }
    const double one_minus = 1.0 - d;
    const double linear = n;
    const double first = 2.0 * d * (1.0 - std::pow(d, n)) / one_minus;
    const double second = d * d * (1.0 - std::pow(d, 2.0 * n)) / (1.0 - d * d);
    return (linear - first + second) / (one_minus * one_minus);
}

double omega1(const TridiagParams& p)
{
    validate(p);
    const double one_minus = 1.0 - p.delta();
    return 1.0 / (p.gamma * p.gamma * one_minus * one_minus);
}

double omega2(const TridiagParams& p)
{
    validate(p);
    const double d = p.delta();
    if (near_one(d)) {
        return tn_closed_form(p) / (p.gamma * p.gamma) - omega1(p) * static_cast<double>(p.n);
    }
    const double n = static_cast<double>(p.n);
    const double one_minus = 1.0 - d;
    const double first = 2.0 * d * (1.0 - std::pow(d, n)) / one_minus;
    const double second = d * d * (1.0 - std::pow(d, 2.0 * n)) / (1.0 - d * d);
    return omega1(p) * (second - first);
}

TheoryReport certify_theorem(const TridiagParams& p)
{
    validate(p);
    if (p.n < 2) throw std::invalid_argument("certify_theorem: n must be at least 2");

    const DenseMatrix x = closed_form_inverse(p);
    const DenseMatrix b = diag_to_columns(x);
    const SvdFactorization fx = thin_svd(x);
    const SvdFactorization fb = thin_svd(b);

    TheoryReport r;
    r.n = p.n;
    r.sigma1_x = fx.sigma.front();
    r.spectral_bound = spectral_norm_bound(p);
    r.x_rank1_err_sq = frobenius_norm_sq(x - rank_k_approx(fx, 1));
    r.b_rank1_err_sq = frobenius_norm_sq(b - rank_k_approx(fb, 1));
    r.frob_sq = frobenius_norm_sq(x);
    r.tn_over_gamma_sq = tn_closed_form(p) / (p.gamma * p.gamma);
    r.delta = p.delta();
    r.omega1 = omega1(p);
    r.omega2_n = omega2(p);
    return r;
}

std::vector<std::string> theory_violations(const TheoryReport& r)
{
    constexpr double kRel = 1e-9;
    std::vector<std::string> failed;
    if (!(r.sigma1_x <= r.spectral_bound * (1.0 + 1e-12))) failed.emplace_back("sigma1_x <= spectral_bound");

    const double eckart_young = r.frob_sq - r.sigma1_x * r.sigma1_x;
    if (!(std::abs(r.x_rank1_err_sq - eckart_young) <= kRel * r.frob_sq))
        failed.emplace_back("x_rank1_err_sq == frob_sq - sigma1_x^2");

    if (!(r.x_rank1_err_sq >= r.frob_sq - r.spectral_bound * r.spectral_bound - kRel * r.frob_sq))
        failed.emplace_back("x_rank1_err_sq >= frob_sq - spectral_bound^2");

    if (!(r.b_rank1_err_sq <= r.frob_sq - r.tn_over_gamma_sq + kRel * r.frob_sq))
        failed.emplace_back("b_rank1_err_sq <= frob_sq - T_n/gamma^2");

    const double linear_plus_offset = r.omega1 * static_cast<double>(r.n) + r.omega2_n;
    if (!(std::abs(linear_plus_offset - r.tn_over_gamma_sq) <= kRel * std::abs(r.tn_over_gamma_sq)))
        failed.emplace_back("omega1*n + omega2(n) == T_n/gamma^2");
    return failed;
}

SweepAnalysis analyze_sweep(const std::vector<TheoryReport>& reports)
{
    SweepAnalysis out;
    if (reports.empty()) return out;

    // Walk back from the largest n while B keeps winning.
    std::size_t first_win = reports.size();
    for (std::size_t i = reports.size(); i > 0; --i) {
        if (reports[i - 1].b_rank1_err_sq < reports[i - 1].x_rank1_err_sq) {
            first_win = i - 1;
        } else {
            break;
        }
    }
    if (first_win < reports.size()) {
        out.crossing_n = reports[first_win].n;
        out.gap_increasing = true;
        for (std::size_t i = first_win + 1; i < reports.size(); ++i) {
            const double prev = reports[i - 1].x_rank1_err_sq - reports[i - 1].b_rank1_err_sq;
            const double cur = reports[i].x_rank1_err_sq - reports[i].b_rank1_err_sq;
            if (!(cur > prev)) out.gap_increasing = false;
        }
    }

    constexpr double kResolvable = 1e3 * std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i + 2 < reports.size(); ++i) {
        if (reports[i + 1].n != reports[i].n + 1 || reports[i + 2].n != reports[i + 1].n + 1) continue;
        const double d0 = reports[i + 1].omega2_n - reports[i].omega2_n;
        const double d1 = reports[i + 2].omega2_n - reports[i + 1].omega2_n;
        const double scale = std::max(1.0, std::abs(reports[i + 2].omega2_n));
        if (std::abs(d1) <= kResolvable * scale || d0 == 0.0) continue;
        out.omega2_increment_ratios.push_back(std::abs(d1 / d0));
    }
    return out;
}

}  // namespace reshape::tridiag
