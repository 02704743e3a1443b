// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "npt/io.hpp"
#include "npt/kdv.hpp"
#include "npt/lattice.hpp"
#include "npt/nanopteron.hpp"
#include "npt/params.hpp"
#include "npt/ripple.hpp"
#include "npt/spectral.hpp"

using namespace npt;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string g(double v)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

int points_for(double eps)
{
    return Grid::resolve_points(40.0, 4096, find_Keps(DimerParams::make(2.0, eps)).K);
}

struct Solved {
    std::unique_ptr<NanopteronSolver> solver;
    NanopteronResult result;
};

std::map<double, Solved>& solved()
{
    static std::map<double, Solved> m;
    return m;
}

const Solved& solve(double eps)
{
    auto& m = solved();
    auto it = m.find(eps);
    if (it == m.end()) {
        Solved s;
        s.solver = std::make_unique<NanopteronSolver>(DimerParams::make(2.0, eps),
                                                      Grid(40.0, points_for(eps)));
        s.result = iterate_nanopteron(*s.solver);
        it = m.emplace(eps, std::move(s)).first;
    }
    return it->second;
}

// ---------------------------------------------------------------------------

void dispersion_suite(Outcome& o)
{
    const int n = 10000;
    const double h = 1e-6;
    int chain = 0, deriv = 0, ident = 0;
    double worst_id = 0;
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        const double cw2 = sound_speed_sq(w);
        for (int i = 0; i < n; ++i) {
            const double k = -pi + 2 * pi * i / n;
            const auto [lm, lp] = lambda_pm(k, w);
            if (!(0.0 <= lm && lm <= 2.0 && 2.0 < 2 * w && 2 * w <= lp && lp <= 2 + 2 * w)) ++chain;
            for (auto f : {lambda_minus, lambda_plus}) {
                const double d = (f(k + h, w) - f(k - h, w)) / (2 * h);
                if (!(std::abs(d) <= 2.0 && std::abs(d) <= 2 * cw2 * std::abs(k))) ++deriv;
            }
            const Mat2 j1 = J1(k, w), j2 = J2(k, w);
            const double ids[] = {
                std::abs(lambda_minus(k + pi, w) - lm),
                std::abs(lambda_plus(k + pi, w) - lp),
                std::abs(lambda_minus(-k, w) - lm),
                std::abs(lambda_plus(-k, w) - lp),
                max_abs_diff(j1 * j2, diag(1.0, 1.0)),
                max_abs_diff(j1 * L_tilde(k, w) * j2, diag(lm, lp)),
                std::abs(gamma(-k, w) * beta(-k, w) - gamma(k, w) * rho(k, w)),
            };
            for (double v : ids) {
                worst_id = std::max(worst_id, v);
                if (!(v < 1e-10)) ++ident;
            }
        }
    }
    o.detail << "4 x 10^4 wavenumbers; bound violations " << chain << ", derivative violations " << deriv
             << ", identity defects " << ident << " (worst " << g(worst_id) << ")";
    o.require(chain == 0, "lambda bounds");
    o.require(deriv == 0, "derivative bounds");
    o.require(ident == 0, "identities to 1e-10");
}

void kc_certification(Outcome& o)
{
    int count = 0, bad = 0;
    double worst = 0;
    for (double w : {1.1, 2.0, 5.0, 10.0}) {
        const double cw = std::sqrt(sound_speed_sq(w));
        for (double dc : {1e-3, 0.01, 0.05, 0.2, 0.5}) {
            const double c = cw + dc;
            const KcRoot r = find_kc(c, w);
            ++count;
            worst = std::max(worst, r.residual);
            if (!(r.residual < 1e-11 && r.k >= std::sqrt(2 * w) / c && r.k <= std::sqrt(2 + 2 * w) / c))
                ++bad;
        }
    }
    o.detail << count << " (c, w) pairs, worst residual " << g(worst) << ", failures " << bad;
    o.require(count == 20 && bad == 0, "residual < 1e-11 and bracket membership");
}

void kdv_layer(Outcome& o)
{
    const Grid grid(40.0, 4096);
    for (double w : {1.1, 2.0, 10.0}) {
        const auto p = DimerParams::make(w, 0.1);
        const auto prof = KdvProfile::build(grid, p);
        const double r1 = kdv_residual(prof.sigma.values, grid, p);
        const double r2 = sigma_identity_residual(prof, grid);
        o.detail << "w=" << w << ": kdv " << g(r1) << ", identity " << g(r2) << "; ";
        o.require(r1 < 1e-10, "kdv residual at w=" + g(w));
        o.require(r2 < 1e-8, "sigma identity at w=" + g(w));
    }
}

void multiplier_convergence(Outcome& o)
{
    const Grid grid(40.0, 4096);
    std::vector<double> le, lerr;
    for (double e : {0.2, 0.1, 0.05, 0.025}) {
        const auto p = DimerParams::make(2.0, e);
        double m = 0;
        for (double K : grid.K) m = std::max(m, std::abs(varpi_eps(K, p) - varpi0(K, p)));
        le.push_back(std::log(e));
        lerr.push_back(std::log(m));
        o.detail << "eps=" << e << ": " << g(m) << "; ";
    }
    const double k = slope(le, lerr);
    o.detail << "fitted order " << g(k);
    o.require(k >= 1.9, "order >= 1.9");
}

void ripple_solver(Outcome& o)
{
    const RippleProblem rp(DimerParams::make(2.0, 0.1));
    std::vector<double> la, ln;
    RippleSolution zero;
    for (double a : {0.0, 1e-3, 1e-2}) {
        const auto s = rp.solve(a);
        o.detail << "a=" << a << ": " << s.iterations << " it, residual " << g(s.residual) << "; ";
        o.require(s.iterations <= 50, "iterations at a=" + g(a));
        o.require(s.residual < 1e-9, "residual at a=" + g(a));
        o.require(s.psi2.at(1) == cplx(0.0) && s.psi2.at(-1) == cplx(0.0), "orthogonality at a=" + g(a));
        if (a == 0.0) {
            zero = s;
            continue;
        }
        double d = 0;
        for (int m = -s.M; m <= s.M; ++m)
            d += std::norm(s.psi1.at(m) - zero.psi1.at(m)) + std::norm(s.psi2.at(m) - zero.psi2.at(m));
        la.push_back(std::log(a));
        ln.push_back(0.5 * std::log(d));
    }
    const double k = slope(la, ln);
    o.detail << "Lipschitz slope " << g(k);
    o.require(std::abs(k - 1.0) <= 0.1, "log-log slope within 1 +- 0.1");
}

void nanopteron_solve(Outcome& o)
{
    const auto& r = solve(0.1).result.report;
    const auto& t = r.theta_residual;
    o.detail << r.iterations << " iterations; residual theta1 " << g(t.theta1) << " (rel " << g(t.theta1_rel)
             << "), theta2 " << g(t.theta2) << " (rel " << g(t.theta2_rel) << "), periodic " << g(t.periodic)
             << "; parity " << g(r.parity_defect_1) << "/" << g(r.parity_defect_2) << "; amplitude consistency "
             << g(r.amplitude_consistency);
    o.require(r.converged, "converged");
    o.require(std::max({t.theta1, t.theta2, t.theta1_rel, t.theta2_rel, t.periodic}) < 1e-7,
              "composite residual < 1e-7");
    o.require(r.parity_defect_1 < 1e-10 && r.parity_defect_2 < 1e-10, "parity to 1e-10");
    o.require(r.amplitude_consistency < 1e-9, "amplitude consistency < 1e-9");
}

void scaling_laws(Outcome& o)
{
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> le, ln, as;
    for (double e : eps) {
        const auto& r = solve(e).result.report;
        le.push_back(std::log(e));
        ln.push_back(std::log(r.eta_norms[0]));
        as.push_back(std::abs(r.a_value));
        o.detail << "eps=" << e << ": |eta| " << g(r.eta_norms[0]) << ", |a| " << g(std::abs(r.a_value)) << "; ";
    }
    const double k = slope(le, ln);
    o.detail << "eta slope " << g(k);
    o.require(k >= 0.8 && k <= 1.2, "eta slope in [0.8, 1.2]");
    for (int r = 1; r <= 3; ++r) {
        bool dec = true;
        for (std::size_t i = 1; i < eps.size(); ++i)
            dec = dec && as[i] / std::pow(eps[i], r) < as[i - 1] / std::pow(eps[i - 1], r);
        o.require(dec, "|a|/eps^" + std::to_string(r) + " decreasing");
    }
}

void kappa_agreement(Outcome& o)
{
    std::map<double, double> rel;
    for (double e : {0.2, 0.1, 0.05}) {
        const NanopteronSolver s(DimerParams::make(2.0, e), Grid(40.0, points_for(e)));
        rel[e] = std::abs(s.kappa() - s.kappa_star()) / std::abs(s.kappa_star());
        o.detail << "eps=" << e << ": " << g(rel[e]) << "; ";
    }
    const double drop = rel[0.05] > 0 ? rel[0.2] / rel[0.05] : INFINITY;
    o.detail << "drop 0.2 -> 0.05: " << g(drop);
    o.require(rel[0.1] < 1e-6, "relative gap < 1e-6 at eps 0.1");
    o.require(drop >= 100.0, "drop >= 100x");
}

void traveling_wave(Outcome& o)
{
    const auto& sv = solve(0.1);
    const auto prof = descale(*sv.solver, sv.result.state, sv.result.ripple);
    const auto lead = descale_leading(*sv.solver);
    const SimConfig cfg;  // dt 0.02, T 500, J 2048
    const SimResult full = simulate(prof, cfg);
    const SimResult approx = simulate(lead, cfg);
    o.detail << "speed " << full.speed << " vs c_eps " << prof.c_eps << " (rel " << g(full.speed_rel_error)
             << "); shape error t0 " << g(full.shape_error_t0) << ", max " << g(full.shape_error_max)
             << ", final " << g(full.shape_error_final) << " (peak " << g(prof.eval(0, 0.0))
             << "); energy drift " << g(full.energy_drift) << "; leading-order final " << g(approx.shape_error_final);
    o.require(full.speed_rel_error < 5e-3, "speed within 0.5%");
    o.require(full.shape_error_max <= 10.0 * full.shape_error_t0, "shape error <= 10x its t=0 value");
    o.require(full.energy_drift < 1e-6, "energy drift < 1e-6");
    o.require(approx.shape_error_final > full.shape_error_final, "leading-order run worse at T");
}

void oracles(Outcome& o)
{
    const auto& sv = solve(0.1);
    const NanopteronSolver& s = *sv.solver;
    const Grid& grid = s.grid();
    std::vector<double> v(grid.N);
    for (int j = 0; j < grid.N; ++j) v[j] = std::tanh(grid.X[j]) / std::cosh(grid.X[j]);
    const auto u = s.P_eps_solve(s.T_apply(v));
    double ep = 0;
    for (int j = 0; j < grid.N; ++j) ep = std::max(ep, std::abs(u[j] - v[j]));
    ep /= sup_norm(v);

    const AOperator& A = s.A();
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> amp(-2, 2), wid(0.3, 4);
    double ea = 0;
    for (int i = 0; i < 10; ++i) {
        const double a = amp(gen), wd = wid(gen);
        std::vector<double> f(grid.N);
        for (int j = 0; j < grid.N; ++j) f[j] = a * std::exp(-grid.X[j] * grid.X[j] / (wd * wd));
        const auto back = A.inverse(A.apply(f)).u;
        double e = 0;
        for (int j = 0; j < grid.N; ++j) e = std::max(e, std::abs(back[j] - f[j]));
        ea = std::max(ea, e / sup_norm(f));
    }

    const NanopteronSolver again(s.params(), grid);
    const auto r2 = iterate_nanopteron(again);
    const bool same = io::to_json(sv.result.report).dump() == io::to_json(r2.report).dump() &&
                      io::to_json(sv.result.ripple).dump() == io::to_json(r2.ripple).dump();
    o.detail << "P_eps round trip " << g(ep) << ", A round trip " << g(ea) << ", reports "
             << (same ? "bit-identical" : "differ");
    o.require(ep < 1e-7, "P_eps round trip < 1e-7");
    o.require(ea < 1e-8, "A round trip < 1e-8");
    o.require(same, "bit-identical reports");
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> all = {
        {1, "dispersion suite", 5, dispersion_suite},
        {2, "k_c certification", 1, kc_certification},
        {3, "KdV layer", 5, kdv_layer},
        {4, "multiplier convergence", 1, multiplier_convergence},
        {5, "ripple solver", 30, ripple_solver},
        {6, "nanopteron solve", 300, nanopteron_solve},
        {7, "scaling laws", 1800, scaling_laws},
        {8, "kappa agreement", 60, kappa_agreement},
        {9, "traveling-wave verification", 600, traveling_wave},
        {10, "forward/inverse oracles", 60, oracles},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(dt < c.limit_s, "runtime limit " + g(c.limit_s) + " s");
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s  %s: %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.str().c_str(), dt);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
