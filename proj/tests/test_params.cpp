#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "npt/params.hpp"

using namespace npt;
using std::numbers::pi;

namespace {

std::vector<double> random_k(int n, unsigned seed, double lo = -2 * pi, double hi = 2 * pi)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> k(n);
    for (auto& v : k) v = d(gen);
    return k;
}

}  // namespace

TEST(DimerParams, DerivedFieldsMatchFormulas)
{
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        const auto p = DimerParams::make(w, 0.1);
        EXPECT_DOUBLE_EQ(p.c_w, std::sqrt(2 * w / (1 + w)));
        EXPECT_DOUBLE_EQ(p.c_eps, std::sqrt(p.c_w * p.c_w + 0.01));
        EXPECT_DOUBLE_EQ(p.alpha_w, p.c_w * p.c_w / 3 * (1 - w + w * w) / ((1 + w) * (1 + w)));
        EXPECT_DOUBLE_EQ(p.sigma0, 3 / (8 * w));
        EXPECT_DOUBLE_EQ(p.q0, 1 / (2 * std::sqrt(p.alpha_w)));
        EXPECT_GT(p.c_w, 1.0);
        EXPECT_GT(p.c_eps, p.c_w);
        EXPECT_GT(p.alpha_w, 0.0);
    }
}

TEST(DimerParams, RejectsInvalid)
{
    EXPECT_THROW(DimerParams::make(1.0, 0.1), std::invalid_argument);
    EXPECT_THROW(DimerParams::make(0.5, 0.1), std::invalid_argument);
    EXPECT_THROW(DimerParams::make(2.0, 0.0), std::invalid_argument);
    EXPECT_THROW(DimerParams::make(2.0, 1.0), std::invalid_argument);
}

TEST(Rho, Examples)
{
    EXPECT_NEAR(rho(0, 2), 3.0, 1e-15);
    EXPECT_NEAR(rho(pi / 2, 2), 1.0, 1e-15);
    EXPECT_NEAR(rho(pi / 4, 2), std::sqrt(5.0), 1e-15);
}

TEST(LambdaPm, Examples)
{
    auto [m0, p0] = lambda_pm(0, 2);
    EXPECT_EQ(m0, 0.0);
    EXPECT_NEAR(p0, 6.0, 1e-15);
    auto [m1, p1] = lambda_pm(pi / 2, 2);
    EXPECT_NEAR(m1, 2.0, 1e-15);
    EXPECT_NEAR(p1, 4.0, 1e-15);
    auto [m2, p2] = lambda_pm(pi, 3);
    EXPECT_NEAR(m2, 0.0, 1e-15);
    EXPECT_NEAR(p2, 8.0, 1e-15);
}

TEST(Beta, Examples)
{
    EXPECT_NEAR(std::abs(beta(0, 2) - cplx(3, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(beta(pi / 2, 2) - cplx(0, 1)), 0.0, 1e-15);
    for (double k : random_k(50, 1)) EXPECT_NEAR(std::norm(beta(k, 2.0)), std::pow(rho(k, 2.0), 2), 1e-13);
}

TEST(Gamma, Examples)
{
    EXPECT_NEAR(std::abs(gamma(0, 2) - cplx(2, 0)), 0.0, 1e-15);
    // e^{-i pi/2} + e^{i pi/2} rho / beta = -i + i (1 / i) = 1 - i
    EXPECT_NEAR(std::abs(gamma(pi / 2, 2) - cplx(1, -1)), 0.0, 1e-15);
    for (double k : random_k(50, 2)) {
        const cplx lhs = gamma(-k, 2) * beta(-k, 2);
        const cplx rhs = gamma(k, 2) * rho(k, 2);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12) << "k = " << k;
    }
}

// The literal normalizer has a zero at k = pi; this is why J1/J2 use the lifted one.
TEST(Gamma, VanishesAtPi)
{
    for (double w : {1.1, 2.0, 10.0}) EXPECT_LT(std::abs(gamma(pi, w)), 1e-15);
}

TEST(Normalizer, NonvanishingSpecialAndCloseToGammaNearZero)
{
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        for (double k : random_k(200, 3, -10, 10)) {
            const cplx n = normalizer(k, w);
            EXPECT_NEAR(std::abs(n), 2.0, 1e-14);
            EXPECT_LT(std::abs(normalizer(-k, w) * beta(-k, w) - n * rho(k, w)), 1e-12);
            EXPECT_LT(std::abs(normalizer(-k, w) - std::conj(n)), 1e-14);
        }
        for (double k : {1e-2, 1e-3}) {
            EXPECT_LT(std::abs(normalizer(k, w) - gamma(k, w)), 10 * k * k);
        }
    }
}

TEST(J, ValuesAtZero)
{
    for (double w : {1.1, 2.0, 10.0}) {
        const double s = 1 / (4 * (1 + w));
        const Mat2 j1 = J1(0, w), j2 = J2(0, w);
        EXPECT_LT(max_abs_diff(j1, {s, s, s, -s}), 1e-15);
        const double t = 2 * (1 + w);
        EXPECT_LT(max_abs_diff(j2, {t, t, t, -t}), 1e-13);
    }
}

TEST(J, InverseAndDiagonalization)
{
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        for (double k : random_k(50, 4)) {
            EXPECT_LT(max_abs_diff(J1(k, w) * J2(k, w), diag(1.0, 1.0)), 1e-12);
            const auto [lm, lp] = lambda_pm(k, w);
            EXPECT_LT(max_abs_diff(J1(k, w) * L_tilde(k, w) * J2(k, w), diag(lm, lp)), 1e-12);
        }
    }
}

TEST(VarpiC, LimitAndValues)
{
    const double w = 2, c = 1.5, cw2 = sound_speed_sq(w);
    EXPECT_NEAR(varpi_c(0.0, c, w), -cw2 / (c * c - cw2), 1e-15);
    EXPECT_NEAR(varpi_c(1e-9, c, w), -cw2 / (c * c - cw2), 1e-14);
    EXPECT_NEAR(varpi_c(pi / 2, c, w), -2 / (c * c * pi * pi / 4 - 2), 1e-14);
    for (double k : {1e-3, 1e-2, 0.1, 1.0}) {
        const double lm = lambda_minus(k, w);
        const double raw = -lm / (c * c * k * k - lm);
        EXPECT_LT(std::abs(varpi_c(k, c, w) - raw) / std::abs(raw), 1e-8) << k;
    }
    EXPECT_THROW(varpi_c(0.3, std::sqrt(cw2), w), std::invalid_argument);
    EXPECT_THROW(varpi_c(0.3, 1.0, w), std::invalid_argument);
}

TEST(Kc, SignChangeOnBracket)
{
    const double c = 1.3, w = 2;
    EXPECT_GE(xi_c(std::sqrt(2 * w) / c, c, w), 0.0);
    EXPECT_LE(xi_c(std::sqrt(2 + 2 * w) / c, c, w), 0.0);
}

TEST(Kc, RootResidualAndResonance)
{
    int count = 0;
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        const double cw = std::sqrt(sound_speed_sq(w));
        for (double dc : {1e-3, 0.01, 0.05, 0.2, 0.5}) {
            const double c = cw + dc;
            const KcRoot r = find_kc(c, w);
            EXPECT_LT(r.residual, 1e-12);
            EXPECT_GE(r.k, std::sqrt(2 * w) / c);
            EXPECT_LE(r.k, std::sqrt(2 + 2 * w) / c);
            EXPECT_NEAR(std::sqrt(lambda_plus(r.k, w)) / r.k, c, 1e-10);
            EXPECT_GT(r.slope, 0.0);
            ++count;
        }
    }
    EXPECT_EQ(count, 20);
}

TEST(Kc, DecreasingInSpeed)
{
    const double w = 2, cw = std::sqrt(sound_speed_sq(w));
    double prev = INFINITY;
    for (int i = 1; i <= 200; ++i) {
        const double k = find_kc(cw + 0.005 * i, w).k;
        EXPECT_LT(k, prev);
        prev = k;
    }
}

// The bracket always straddles the root for real c > 0, so only a poisoned speed can fail.
TEST(Kc, FailsWithoutSignChange)
{
    EXPECT_THROW(find_kc(std::nan(""), 2.0), std::runtime_error);
}

TEST(VarpiEps, LimitValues)
{
    const auto p = DimerParams::make(2.0, 0.1);
    EXPECT_DOUBLE_EQ(varpi0(0, p), -p.cw2());
    EXPECT_NEAR(varpi_eps(0, p), -p.cw2(), 1e-15);
    EXPECT_NEAR(varpi_eps(1e-7, p), -p.cw2(), 1e-12);
}

// Least-squares slope of log sup|varpi_eps - varpi0| against log eps over a K-grid wide enough
// to hold the maximizer, which sits near K = 1.7/eps.
TEST(VarpiEps, ConvergesAtSecondOrder)
{
    std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double e : eps) {
        const auto p = DimerParams::make(2.0, e);
        double m = 0;
        for (int i = 0; i <= 8000; ++i) {
            const double K = -200 + 0.05 * i;
            m = std::max(m, std::abs(varpi_eps(K, p) - varpi0(K, p)));
        }
        const double x = std::log(e), y = std::log(m);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(eps.size());
    EXPECT_GE((n * sxy - sx * sy) / (n * sxx - sx * sx), 1.9);
}

TEST(Dispersion, BoundsPeriodicityParityOnDenseGrid)
{
    const int n = 10000;
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        const double cw2 = sound_speed_sq(w);
        for (int i = 0; i < n; ++i) {
            const double k = -pi + 2 * pi * i / n;
            const auto [lm, lp] = lambda_pm(k, w);
            ASSERT_LE(0.0, lm);
            ASSERT_LE(lm, 2.0);
            ASSERT_LT(2.0, 2 * w);
            ASSERT_LE(2 * w, lp);
            ASSERT_LE(lp, 2 + 2 * w);
            EXPECT_NEAR(lambda_minus(k + pi, w), lm, 1e-10);
            EXPECT_NEAR(lambda_plus(k + pi, w), lp, 1e-10);
            EXPECT_NEAR(lambda_minus(-k, w), lm, 1e-14);
            EXPECT_NEAR(lambda_plus(-k, w), lp, 1e-14);
            const double h = 1e-6;
            const double dm = (lambda_minus(k + h, w) - lambda_minus(k - h, w)) / (2 * h);
            const double dp = (lambda_plus(k + h, w) - lambda_plus(k - h, w)) / (2 * h);
            ASSERT_LE(std::abs(dm), 2.0) << k;
            ASSERT_LE(std::abs(dp), 2.0) << k;
            ASSERT_LE(std::abs(dm), 2 * cw2 * std::abs(k)) << k;
            ASSERT_LE(std::abs(dp), 2 * cw2 * std::abs(k)) << k;
            if (k != 0.0) {
                ASSERT_LE(std::sqrt(lm) / std::abs(k), std::sqrt(cw2) * (1 + 1e-15));
            }
        }
    }
}
