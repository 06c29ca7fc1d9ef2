#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "reshape/matrix.hpp"
#include "support.hpp"

using namespace reshape;
using testsupport::max_abs_diff;
using testsupport::worked_x1;
using testsupport::worked_x2;

namespace {

DenseMatrix reconstruct(const SvdFactorization& f)
{
    return rank_k_approx(f, f.sigma.size());
}

}  // namespace

TEST(DenseMatrix, RejectsBadShapesAndValues)
{
    EXPECT_THROW(DenseMatrix(0, 3), std::invalid_argument);
    EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
    EXPECT_THROW(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    EXPECT_THROW(DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}), std::invalid_argument);
    EXPECT_THROW((DenseMatrix{{1.0, 2.0}, {3.0}}), std::invalid_argument);
}

TEST(FrobeniusNorm, KnownValues)
{
    EXPECT_EQ(frobenius_norm(DenseMatrix(2, 2)), 0.0);
    EXPECT_NEAR(frobenius_norm(worked_x1()), std::sqrt(2548.0), 1e-12);
    EXPECT_NEAR(frobenius_norm(worked_x2()), std::sqrt(2548.0), 1e-12);
    EXPECT_NEAR(frobenius_norm(DenseMatrix::identity(7)), std::sqrt(7.0), 1e-15);
}

TEST(ThinSvd, DiagonalMatrix)
{
    const DenseMatrix d{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}};
    const auto f = thin_svd(d);
    ASSERT_EQ(f.sigma.size(), 3u);
    EXPECT_NEAR(f.sigma[0], 3.0, 1e-15);
    EXPECT_NEAR(f.sigma[1], 2.0, 1e-15);
    EXPECT_NEAR(f.sigma[2], 1.0, 1e-15);
    EXPECT_LE(max_abs_diff(f.u, DenseMatrix::identity(3)), 1e-15);
    EXPECT_LE(max_abs_diff(f.v, DenseMatrix::identity(3)), 1e-15);
}

TEST(ThinSvd, WorkedExampleRanks)
{
    const auto s1 = thin_svd(worked_x1()).sigma;
    EXPECT_GT(s1[0], 0.0);
    for (std::size_t i = 1; i < s1.size(); ++i) EXPECT_LE(s1[i], 1e-10 * s1[0]);

    const auto s2 = thin_svd(worked_x2()).sigma;
    std::size_t rank = 0;
    for (double s : s2) rank += s > 1e-10 * s2[0] ? 1 : 0;
    EXPECT_EQ(rank, 4u);
}

TEST(RankKApprox, WorkedExampleError)
{
    const DenseMatrix x2 = worked_x2();
    const auto f = thin_svd(x2);
    const DenseMatrix y2 = rank_k_approx(f, 1);
    const double oracle = testsupport::worked_example_rank1_error();
    const double err = frobenius_norm_sq(x2 - y2);
    EXPECT_NEAR(err, oracle, 1e-6);
    EXPECT_EQ(std::lround(err), 378);
    EXPECT_NEAR(relative_error(x2, y2), std::sqrt(oracle / 2548.0), 1e-12);
    const auto rep = approx_report(x2, f, 1);
    EXPECT_EQ(rep.parameters, 13u);
    EXPECT_NEAR(rep.abs_error_sq, oracle, 1e-6);

    // Rank-1 truncation of X2 to one decimal.
    const double printed[3][2] = {{3.1, 7.5}, {4.2, 9.9}, {5.2, 12.3}};
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_NEAR(y2(i, 0), -printed[i / 3][0], 0.05);
        EXPECT_NEAR(y2(i, 1), printed[i / 3][0], 0.05);
        EXPECT_NEAR(y2(i, 2), -printed[i / 3][1], 0.05);
        EXPECT_NEAR(y2(i, 3), printed[i / 3][1], 0.05);
    }

    const DenseMatrix x1 = worked_x1();
    EXPECT_NEAR(frobenius_norm_sq(x1 - rank_k_approx(thin_svd(x1), 1)), 0.0, 1e-20 * 2548.0 + 1e-18);
    EXPECT_EQ(parameter_count(6, 6, 1), 12u);
}

TEST(RankKApprox, IdentityError)
{
    for (std::size_t n : {2u, 10u, 100u}) {
        const DenseMatrix eye = DenseMatrix::identity(n);
        const auto f = thin_svd(eye);
        EXPECT_NEAR(frobenius_norm_sq(eye - rank_k_approx(f, 1)), double(n - 1), 1e-9) << n;
    }
    const DenseMatrix i2 = DenseMatrix::identity(2);
    EXPECT_NEAR(relative_error(i2, rank_k_approx(thin_svd(i2), 1)), std::sqrt(0.5), 1e-15);
}

TEST(RankKApprox, RangeChecked)
{
    const auto f = thin_svd(worked_x2());
    EXPECT_THROW(rank_k_approx(f, 0), std::invalid_argument);
    EXPECT_THROW(rank_k_approx(f, 5), std::invalid_argument);
    EXPECT_NO_THROW(rank_k_approx(f, 4));
}

TEST(RankKApprox, FullRankReproducesInput)
{
    std::mt19937_64 rng(11);
    const DenseMatrix a = testsupport::random_matrix(rng, 9, 5);
    EXPECT_LE(testsupport::relative_diff(reconstruct(thin_svd(a)), a), 1e-10);
}

TEST(RelativeError, Errors)
{
    const DenseMatrix a = worked_x1();
    EXPECT_EQ(relative_error(a, a), 0.0);
    EXPECT_THROW(relative_error(a, DenseMatrix(6, 5)), std::invalid_argument);
    EXPECT_THROW(relative_error(DenseMatrix(2, 2), DenseMatrix(2, 2)), std::domain_error);
}

TEST(ParameterCount, PublishedShapes)
{
    EXPECT_EQ(parameter_count(400, 600, 5), 5000u);
    EXPECT_EQ(parameter_count(400, 600, 15), 15000u);
    EXPECT_EQ(parameter_count(400, 600, 25), 25000u);
    EXPECT_EQ(parameter_count(100, 2400, 2), 5000u);
    EXPECT_EQ(parameter_count(100, 2400, 3), 7500u);
    EXPECT_EQ(parameter_count(100, 2400, 4), 10000u);
    EXPECT_EQ(parameter_count(1, 1, 1), 2u);
    EXPECT_THROW(parameter_count(4, 4, 0), std::invalid_argument);
}

TEST(ThinSvd, VectorShapes)
{
    const DenseMatrix row{{3, 4}};
    const auto fr = thin_svd(row);
    ASSERT_EQ(fr.sigma.size(), 1u);
    EXPECT_NEAR(fr.sigma[0], 5.0, 1e-15);
    EXPECT_LE(max_abs_diff(reconstruct(fr), row), 1e-14);

    const DenseMatrix col{{1}, {2}, {2}};
    const auto fc = thin_svd(col);
    ASSERT_EQ(fc.sigma.size(), 1u);
    EXPECT_NEAR(fc.sigma[0], 3.0, 1e-15);
    EXPECT_EQ(fc.u.rows(), 3u);
    EXPECT_EQ(fc.v.rows(), 1u);
    EXPECT_LE(max_abs_diff(reconstruct(fc), col), 1e-14);
}

TEST(ThinSvd, ZeroAndRankDeficientInputs)
{
    const auto fz = thin_svd(DenseMatrix(4, 3));
    for (double s : fz.sigma) EXPECT_EQ(s, 0.0);
    EXPECT_LE(testsupport::orthonormality_defect(fz.u), 1e-14);
    EXPECT_LE(testsupport::orthonormality_defect(fz.v), 1e-14);

    const auto f = thin_svd(worked_x1());
    EXPECT_LE(testsupport::orthonormality_defect(f.u), 1e-12);
    EXPECT_LE(testsupport::orthonormality_defect(f.v), 1e-12);
}

TEST(ThinSvd, KnownSpectrum)
{
    std::mt19937_64 rng(5);
    const std::vector<double> sigma{7.5, 3.0, 2.999, 1e-3, 1e-9};
    const DenseMatrix a = testsupport::with_spectrum(rng, 12, 8, sigma);
    const auto s = singular_values(a);
    for (std::size_t i = 0; i < sigma.size(); ++i) EXPECT_NEAR(s[i], sigma[i], 1e-13 * sigma[0]) << i;
    // Below the 1e-12 ||A||_F floor columns count as numerical null space.
    for (std::size_t i = sigma.size(); i < s.size(); ++i) EXPECT_LE(s[i], 1e-12 * frobenius_norm(a));
}

// Invariant properties over seeded random inputs.

TEST(SvdProperties, EckartYoungAgainstRandomRankOne)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const DenseMatrix a = testsupport::random_matrix(rng, 5, 4);
        const double best = frobenius_norm_sq(a - rank_k_approx(thin_svd(a), 1));
        for (int c = 0; c < 1000; ++c) {
            const DenseMatrix u = testsupport::random_matrix(rng, 5, 1, -2.0, 2.0);
            const DenseMatrix v = testsupport::random_matrix(rng, 1, 4, -2.0, 2.0);
            EXPECT_LE(best, frobenius_norm_sq(a - u * v) * (1 + 1e-12));
        }
    }
}

TEST(SvdProperties, TailIdentityAndNormBounds)
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(1, 14);
    for (int trial = 0; trial < 200; ++trial) {
        const DenseMatrix a = testsupport::random_matrix(rng, dim(rng), dim(rng));
        const auto f = thin_svd(a);
        const double fro_sq = frobenius_norm_sq(a);
        EXPECT_LE(f.sigma[0], std::sqrt(fro_sq) * (1 + 1e-12));
        for (std::size_t k = 1; k <= f.sigma.size(); ++k) {
            const double err = frobenius_norm_sq(a - rank_k_approx(f, k));
            const double tail = tail_energy(f.sigma, k);
            EXPECT_NEAR(err, tail, 1e-9 * fro_sq + 1e-300);
        }
        const auto st = singular_values(a.transposed());
        for (std::size_t i = 0; i < st.size(); ++i) EXPECT_NEAR(st[i], f.sigma[i], 1e-10 * f.sigma[0]);
    }
}

TEST(SvdProperties, SigmaOneEqualsFrobeniusOnlyForRankOne)
{
    std::mt19937_64 rng(3);
    const DenseMatrix u = testsupport::random_matrix(rng, 6, 1);
    const DenseMatrix v = testsupport::random_matrix(rng, 1, 9);
    const DenseMatrix r1 = u * v;
    EXPECT_NEAR(singular_values(r1)[0], frobenius_norm(r1), 1e-12 * frobenius_norm(r1));
    const DenseMatrix r2 = r1 - testsupport::random_matrix(rng, 6, 1) * testsupport::random_matrix(rng, 1, 9);
    EXPECT_LT(singular_values(r2)[0], frobenius_norm(r2) * (1 - 1e-6));
}

TEST(SvdProperties, SigmaOneMatchesPowerIteration)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const DenseMatrix a = testsupport::with_spectrum(rng, 15, 10, {4.0, 2.0, 1.0, 0.5});
        EXPECT_NEAR(singular_values(a)[0], testsupport::power_sigma1(a, 200), 1e-10 * 4.0);
    }
}

TEST(SvdProperties, FactorsOrthonormalAndReconstruct)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dim(1, 30);
    for (int trial = 0; trial < 150; ++trial) {
        const DenseMatrix a = testsupport::random_matrix(rng, dim(rng), dim(rng));
        const auto f = thin_svd(a);
        EXPECT_LE(testsupport::orthonormality_defect(f.u), 1e-12);
        EXPECT_LE(testsupport::orthonormality_defect(f.v), 1e-12);
        EXPECT_LE(testsupport::relative_diff(reconstruct(f), a), 1e-12);
        for (std::size_t i = 1; i < f.sigma.size(); ++i) EXPECT_GE(f.sigma[i - 1], f.sigma[i]);
        EXPECT_GE(f.sigma.back(), 0.0);
    }
}
