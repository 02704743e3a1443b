#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "npt/io.hpp"
#include "npt/nanopteron.hpp"

using namespace npt;
using std::numbers::pi;

namespace {

struct Case {
    std::unique_ptr<NanopteronSolver> solver;
    NanopteronResult result;
};

int points_for(double eps)
{
    const auto p = DimerParams::make(2.0, eps);
    return Grid::resolve_points(40.0, 4096, find_Keps(p).K);
}

// Converged solves are shared across tests; each costs about a second.
const Case& converged(double eps)
{
    static std::map<double, Case> cache;
    auto it = cache.find(eps);
    if (it == cache.end()) {
        Case c;
        c.solver = std::make_unique<NanopteronSolver>(DimerParams::make(2.0, eps),
                                                      Grid(40.0, points_for(eps)));
        c.result = iterate_nanopteron(*c.solver);
        it = cache.emplace(eps, std::move(c)).first;
    }
    return it->second;
}

const NanopteronSolver& bare(double eps)
{
    static std::map<double, std::unique_ptr<NanopteronSolver>> cache;
    auto& s = cache[eps];
    if (!s) s = std::make_unique<NanopteronSolver>(DimerParams::make(2.0, eps), Grid(40.0, points_for(eps)));
    return *s;
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Chi, OddAndEnvelopedBySigma)
{
    const auto& s = bare(0.1);
    const Grid& g = s.grid();
    const auto& chi = s.chi();
    EXPECT_LT(parity_defect(chi, Parity::odd, g), 1e-10 * sup_norm(chi));
    // single carrier times a smoothed sigma: |chi| / sigma stays bounded where sigma is resolved
    double ratio = 0;
    for (int j = 0; j < g.N; ++j)
        if (std::abs(g.X[j]) < 15) ratio = std::max(ratio, std::abs(chi[j]) / s.sigma()[j]);
    EXPECT_LT(ratio, 10 * sup_norm(chi) / s.params().sigma0);
}

TEST(Chi, SupNormUniformInEps)
{
    std::vector<double> n;
    for (double e : {0.2, 0.1, 0.05}) n.push_back(sup_norm(bare(e).chi()));
    const double hi = *std::max_element(n.begin(), n.end()), lo = *std::min_element(n.begin(), n.end());
    EXPECT_LT(hi / lo, 3.0);
}

TEST(Kappa, MatchesClosedFormAndStaysAwayFromZero)
{
    double prev = INFINITY;
    int sign = 0;
    for (double e : {0.2, 0.1, 0.05}) {
        const auto& s = bare(e);
        const auto& p = s.params();
        const double rel = std::abs(s.kappa() - s.kappa_star()) / std::abs(s.kappa_star());
        if (e == 0.1) {
            EXPECT_LT(rel, 1e-6);
        }
        EXPECT_LE(rel, prev) << e;
        prev = rel;
        const double sigma_hat0 = 2 * p.sigma0 / p.q0 / (2 * pi);
        EXPECT_GE(s.kappa_star(), 2 * pi * (1 + p.w) * sigma_hat0 * 2 * p.w);
        const int sg = s.kappa() > 0 ? 1 : -1;
        if (sign != 0) {
            EXPECT_EQ(sg, sign);
        }
        sign = sg;
    }
}

TEST(Terms, OnlyJ1AndL1AtZeroState)
{
    const auto& s = bare(0.1);
    const auto t = s.assemble(s.zero_state(), s.ripple(0.0));
    EXPECT_GT(sup_norm(t.j[0]), 0.0);
    EXPECT_GT(sup_norm(t.l[0]), 0.0);
    for (int i = 1; i < 5; ++i) {
        EXPECT_EQ(sup_norm(t.j[i]), 0.0) << "j" << i + 1;
        EXPECT_EQ(sup_norm(t.l[i]), 0.0) << "l" << i + 1;
    }
    EXPECT_EQ(sup_norm(t.l31), 0.0);
}

TEST(Terms, ParityAtConvergedState)
{
    const auto& c = converged(0.1);
    const Grid& g = c.solver->grid();
    const auto t = c.solver->assemble(c.result.state, c.result.ripple);
    for (int i = 0; i < 5; ++i) {
        EXPECT_LE(parity_defect(t.j[i], Parity::even, g), 1e-10 * sup_norm(t.j[i])) << "j" << i + 1;
        EXPECT_LE(parity_defect(t.l[i], Parity::odd, g), 1e-10 * sup_norm(t.l[i])) << "l" << i + 1;
    }
    EXPECT_LE(parity_defect(t.l31, Parity::odd, g), 1e-10 * sup_norm(t.l31));
}

TEST(Terms, J1IsOrderEps)
{
    std::vector<double> le, lj;
    for (double e : {0.2, 0.1, 0.05, 0.025}) {
        const auto& s = bare(e);
        const auto t = s.assemble(s.zero_state(), s.ripple(0.0));
        le.push_back(std::log(e));
        lj.push_back(std::log(sup_norm(t.j[0])));
    }
    const double k = slope(le, lj);
    EXPECT_GE(k, 0.9);
    EXPECT_LE(k, 1.2);
}

TEST(PEps, InvertsForwardOperator)
{
    const auto& s = bare(0.1);
    const Grid& g = s.grid();
    std::vector<double> v(g.N);
    for (int j = 0; j < g.N; ++j) v[j] = std::tanh(g.X[j]) / std::cosh(g.X[j]);
    const auto gv = s.T_apply(v);
    EXPECT_LT(std::abs(s.iota(gv)), 1e-10 * sup_norm(gv));
    PSolveInfo info;
    const auto u = s.P_eps_solve(gv, &info);
    EXPECT_LT(max_diff(u, v), 1e-7 * sup_norm(v));
    EXPECT_LT(info.residual, 1e-7);
}

TEST(PEps, ChiMapsToZero)
{
    const auto& s = bare(0.1);
    const auto u = s.P_eps_solve(s.chi());
    EXPECT_LT(sup_norm(u), 1e-12 * sup_norm(s.chi()));
}

TEST(PEps, GrowthAtMostInverseEps)
{
    std::vector<double> r;
    for (double e : {0.2, 0.1, 0.05}) {
        const auto& s = bare(e);
        const Grid& g = s.grid();
        std::vector<double> f(g.N);
        for (int j = 0; j < g.N; ++j) f[j] = std::tanh(g.X[j]) / std::pow(std::cosh(g.X[j]), 2);
        const double q = s.params().q0 / 2;
        r.push_back(weighted_norm(s.P_eps_solve(f), 0, q, g) / weighted_norm(f, 0, q, g));
    }
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LE(r[i], 2.0 * 1.1 * r[i - 1]);
}

TEST(PEps, RejectsEvenInput)
{
    const auto& s = bare(0.1);
    EXPECT_THROW(s.P_eps_solve(s.sigma()), std::invalid_argument);
}

TEST(Solve, ConvergedReportAtTenthEps)
{
    const auto& r = converged(0.1).result.report;
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.theta_residual.theta1_rel, 1e-7);
    EXPECT_LT(r.theta_residual.theta2_rel, 1e-7);
    EXPECT_LT(r.theta_residual.periodic, 1e-7);
    EXPECT_LT(r.amplitude_consistency, 1e-9);
    EXPECT_LT(r.parity_defect_1, 1e-9);
    EXPECT_LT(r.parity_defect_2, 1e-9);
    EXPECT_LT(r.boundary_eta1, 1e-8);
    EXPECT_LT(r.boundary_eta2, 1e-8);
    EXPECT_LT(r.p_residual, 1e-7);
}

TEST(Solve, EtaIsOrderEps)
{
    std::vector<double> le, ln;
    for (double e : {0.2, 0.1, 0.05, 0.025}) {
        le.push_back(std::log(e));
        ln.push_back(std::log(converged(e).result.report.eta_norms[0]));
    }
    const double k = slope(le, ln);
    EXPECT_GE(k, 0.8);
    EXPECT_LE(k, 1.2);
}

TEST(Solve, AmplitudeBeatsEveryPower)
{
    for (int r = 1; r <= 3; ++r) {
        double prev = INFINITY;
        for (double e : {0.2, 0.1, 0.05, 0.025}) {
            const double v = std::abs(converged(e).result.report.a_value) / std::pow(e, r);
            EXPECT_LT(v, prev) << "r " << r << " eps " << e;
            prev = v;
        }
    }
}

TEST(Solve, ReportIsDeterministic)
{
    const auto& c = converged(0.1);
    const NanopteronSolver again(c.solver->params(), c.solver->grid());
    const auto r2 = iterate_nanopteron(again);
    EXPECT_EQ(io::to_json(c.result.report).dump(), io::to_json(r2.report).dump());
}

TEST(Descale, LeadingOrderIsEpsCubed)
{
    std::vector<double> le, lerr, lgap;
    for (double e : {0.2, 0.1, 0.05, 0.025}) {
        const auto& c = converged(e);
        const auto& p = c.solver->params();
        const auto prof = descale(*c.solver, c.result.state, c.result.ripple);
        const double amp = 0.75 * e * e * (1 + p.w) / p.w;
        double err = 0, gap = 0;
        const int J = static_cast<int>(30 / e);
        for (int j = -J; j <= J; ++j) {
            const int comp = j % 2 != 0 ? 0 : 1;
            const double sh = 1 / std::cosh(e * j / (2 * std::sqrt(p.alpha_w)));
            err = std::max(err, std::abs(prof.eval(comp, j) - amp * sh * sh));
            gap = std::max(gap, std::abs(prof.eval(0, j) - prof.eval(1, j)));
        }
        le.push_back(std::log(e));
        lerr.push_back(std::log(err));
        lgap.push_back(std::log(gap));
        const auto [lo, hi] = ripple_period_interval(p.w);
        EXPECT_GE(prof.P_eps, lo) << e;
        EXPECT_LE(prof.P_eps, hi) << e;
    }
    EXPECT_GE(slope(le, lerr), 2.9);
    EXPECT_GT(slope(le, lgap), 2.0);  // p1 - p2 vanishes faster than the eps^2 amplitude
}

TEST(Descale, LeadingProfileComponentsAgreeAtZeroOrder)
{
    const auto& s = bare(0.1);
    const auto prof = descale_leading(s);
    EXPECT_TRUE(prof.approximate);
    EXPECT_EQ(prof.P_eps, 0.0);
    const double amp = 0.75 * 0.01 * (1 + s.params().w) / s.params().w;
    EXPECT_NEAR(prof.eval(0, 0.0), amp, 0.05 * amp);
    EXPECT_NEAR(prof.eval(1, 0.0), amp, 0.05 * amp);
}

// Reflection swaps the two site types: p1(x) = p2(-x).
TEST(Descale, ReflectionExchangesComponents)
{
    const auto& c = converged(0.1);
    const auto prof = descale(*c.solver, c.result.state, c.result.ripple);
    for (double x : {0.5, 3.0, 17.25, 120.0}) {
        EXPECT_NEAR(prof.eval(0, x), prof.eval(1, -x), 1e-14);
        EXPECT_NEAR(prof.eval(0, x, 1), -prof.eval(1, -x, 1), 1e-14);
    }
}
