#include "npt/nanopteron.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace npt {

namespace {

std::vector<Mat2> sample_matrix(Mat2 (*f)(double, double), const Grid& g, double eps, double w,
                                double shift)
{
    std::vector<Mat2> out(g.N);
    for (int n = 0; n < g.N; ++n) out[n] = f(eps * (g.K[n] + shift), w);
    if (shift == 0.0) {
        const int ny = g.N / 2;
        const Mat2 p = f(eps * g.K[ny], w), m = f(-eps * g.K[ny], w);
        out[ny] = {0.5 * (p.a + m.a), 0.5 * (p.b + m.b), 0.5 * (p.c + m.c), 0.5 * (p.d + m.d)};
    }
    return out;
}

std::array<Spectrum, 2> matmul(const std::vector<Mat2>& M, const Spectrum& x, const Spectrum& y)
{
    const std::size_t n = x.size();
    std::array<Spectrum, 2> out{Spectrum(n), Spectrum(n)};
    for (std::size_t i = 0; i < n; ++i) {
        out[0][i] = M[i].a * x[i] + M[i].b * y[i];
        out[1][i] = M[i].c * x[i] + M[i].d * y[i];
    }
    return out;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x)
{
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

bool is_zero(const std::vector<double>& f)
{
    return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
}

double rel_parity_defect(const std::vector<double>& f, Parity p, const Grid& g)
{
    const double s = sup_norm(f);
    return s == 0.0 ? 0.0 : parity_defect(f, p, g) / s;
}

void require_parity(const std::vector<double>& f, Parity p, const Grid& g, const char* name)
{
    const double d = rel_parity_defect(f, p, g);
    if (d > 1e-9) {
        std::ostringstream os;
        os << "forcing term " << name << " is not " << parity_name(p) << " (relative defect " << d
           << ")";
        throw std::logic_error(os.str());
    }
}

double fit_decay_rate(const std::vector<double>& f, const Grid& g)
{
    const double s = sup_norm(f);
    if (s == 0.0) return 0.0;
    int last = -1;
    for (int j = g.N / 2; j < g.N; ++j)
        if (std::abs(f[j]) > 1e-11 * s) last = j;
    if (last < 0) return 0.0;
    const double xe = g.X[last];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int j = g.N / 2; j <= last; ++j) {
        if (g.X[j] < 0.5 * xe || std::abs(f[j]) <= 1e-11 * s) continue;
        const double x = g.X[j], y = std::log(std::abs(f[j]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) return 0.0;
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : -(n * sxy - sx * sy) / den;
}

}  // namespace

NanopteronSolver::NanopteronSolver(const DimerParams& p, const Grid& g, NanopteronConfig cfg)
    : p_(p),
      grid_(g),
      cfg_(cfg),
      ripple_(p, cfg.ripple_modes),
      sigma_(KdvProfile::build(g, p).sigma.values),
      A_(g, p, sigma_)
{
    if (g.k_max() < 5.0 * ripple_.K_eps())
        throw std::invalid_argument("grid does not resolve K_eps; increase N");
    const double e = p.eps;
    J2K_ = sample_matrix(&J2, g, e, p.w, 0.0);
    J1K_ = sample_matrix(&J1, g, e, p.w, 0.0);
    lp_ = sample_symbol([&](double K) { return cplx(lambda_plus(e * K, p.w)); }, g);
    vp_ = sample_symbol([&](double K) { return cplx(varpi_eps(K, p)); }, g);
    vp0_ = sample_symbol([&](double K) { return cplx(varpi0(K, p)); }, g);
    T_ = sample_symbol(
        [&](double K) { return cplx(-e * e * p.ceps2() * K * K + lambda_plus(e * K, p.w)); }, g);
    sinKX_.resize(g.N);
    for (int j = 0; j < g.N; ++j) sinKX_[j] = std::sin(ripple_.K_eps() * g.X[j]);

    const std::vector<double> zero(g.N, 0.0);
    const Pair sig{sigma_, zero};
    S_ = apply_J2(sig);
    const double s2 = 2.0 * (1.0 + p.w);
    S0_ = {sigma_, sigma_};
    for (int j = 0; j < g.N; ++j) S0_[0][j] = S0_[1][j] = s2 * sigma_[j];

    const auto bss = bilinear(sig, sig);
    j1_ = with_symbol(vp_, bss[0]);
    for (int j = 0; j < g.N; ++j) j1_[j] = -(sigma_[j] + j1_[j]);
    l1_ = with_symbol(lp_, bss[1]);
    for (double& v : l1_) v = -v;

    const CoeffPair nu = RippleProblem::nu(cfg.ripple_modes);
    const double Ke = ripple_.K_eps();
    chi_ = eval_mixed(mix(S0_, nu, Ke), false, true)[1];
    kappa_ = iota(chi_);
    const double sighat0 = 2.0 * p.sigma0 / p.q0 / (2.0 * std::numbers::pi);
    kappa_star_ = 2.0 * std::numbers::pi * (1.0 + p.w) * sighat0 * lambda_plus(e * Ke, p.w);

    Pair dS = S_;
    for (int c = 0; c < 2; ++c)
        for (int j = 0; j < g.N; ++j) dS[c][j] -= S0_[c][j];
    t1_ = eval_mixed(mix(dS, nu, Ke), false, true)[1];
    nuS_ = eval_mixed(mix(S_, nu, Ke), false, true)[1];
}

NanopteronState NanopteronSolver::zero_state() const
{
    NanopteronState s;
    s.eta1.values.assign(grid_.N, 0.0);
    s.eta1.parity = Parity::even;
    s.eta2.values.assign(grid_.N, 0.0);
    s.eta2.parity = Parity::odd;
    return s;
}

RippleSolution NanopteronSolver::ripple(double a) const
{
    return ripple_.solve(a, cfg_.ripple_tol, cfg_.ripple_max_iter);
}

double NanopteronSolver::iota(const std::vector<double>& f) const
{
    double s = 0.0;
    for (int j = 0; j < grid_.N; ++j) s += f[j] * sinKX_[j];
    return s * grid_.dx;
}

std::vector<double> NanopteronSolver::with_symbol(const Spectrum& sym, const Spectrum& F) const
{
    Spectrum G = F;
    multiply_inplace(sym, G);
    return inverse_real(grid_, G);
}

Pair NanopteronSolver::apply_J2(const Pair& f) const
{
    const auto h = matmul(J2K_, transform(grid_, f[0]), transform(grid_, f[1]));
    return {inverse_real(grid_, h[0]), inverse_real(grid_, h[1])};
}

std::array<Spectrum, 2> NanopteronSolver::bilinear(const Pair& f, const Pair& g) const
{
    const Pair Jf = apply_J2(f);
    const Pair Jg = &f == &g ? Jf : apply_J2(g);
    std::vector<double> p0(grid_.N), p1(grid_.N);
    for (int j = 0; j < grid_.N; ++j) {
        p0[j] = Jf[0][j] * Jg[0][j];
        p1[j] = Jf[1][j] * Jg[1][j];
    }
    return matmul(J1K_, transform(grid_, p0), transform(grid_, p1));
}

std::vector<NanopteronSolver::Mixed> NanopteronSolver::mix(const Pair& Jf, const CoeffPair& c,
                                                           double omega) const
{
    const int M = static_cast<int>(c[0].size() / 2);
    const double e = p_.eps;
    std::vector<Mixed> out;
    std::vector<cplx> q0(grid_.N), q1(grid_.N);
    for (int m = -M; m <= M; ++m) {
        const cplx c0 = c[0][m + M], c1 = c[1][m + M];
        if (std::max(std::abs(c0), std::abs(c1)) < 1e-30) continue;
        const Mat2 J = J2(e * omega * m, p_.w);
        const cplx a0 = J.a * c0 + J.b * c1;
        const cplx a1 = J.c * c0 + J.d * c1;
        for (int j = 0; j < grid_.N; ++j) {
            q0[j] = Jf[0][j] * a0;
            q1[j] = Jf[1][j] * a1;
        }
        const auto J1s = sample_matrix(&J1, grid_, e, p_.w, omega * m);
        auto h = matmul(J1s, transform(grid_, q0), transform(grid_, q1));
        out.push_back({omega * m, std::move(h[0]), std::move(h[1])});
    }
    return out;
}

Pair NanopteronSolver::eval_mixed(const std::vector<Mixed>& mixed, bool first, bool second) const
{
    const double e = p_.eps;
    const DimerParams p = p_;
    Pair out{std::vector<double>(grid_.N, 0.0), std::vector<double>(grid_.N, 0.0)};
    for (const auto& term : mixed) {
        for (int c = 0; c < 2; ++c) {
            if ((c == 0 && !first) || (c == 1 && !second)) continue;
            const Spectrum sym =
                c == 0 ? sample_symbol([&](double K) { return cplx(varpi_eps(K, p)); }, grid_,
                                       term.omega)
                       : sample_symbol([&](double K) { return cplx(lambda_plus(e * K, p.w)); },
                                       grid_, term.omega);
            Spectrum H = c == 0 ? term.h1 : term.h2;
            multiply_inplace(sym, H);
            const auto v = inverse(grid_, H);
            for (int j = 0; j < grid_.N; ++j)
                out[c][j] += (std::polar(1.0, term.omega * grid_.X[j]) * v[j]).real();
        }
    }
    return out;
}

std::vector<double> NanopteronSolver::T_apply(const std::vector<double>& u) const
{
    return apply_sampled(T_, u, grid_);
}

std::vector<double> NanopteronSolver::P_eps_solve(const std::vector<double>& g,
                                                  PSolveInfo* info) const
{
    PSolveInfo d;
    const double gs = sup_norm(g);
    if (rel_parity_defect(g, Parity::odd, grid_) > 1e-6)
        throw std::invalid_argument("P_eps needs an odd right side");
    if (gs == 0.0) {
        if (info) *info = d;
        return std::vector<double>(grid_.N, 0.0);
    }
    d.iota_in = iota(g);
    std::vector<double> gm = g;
    axpy(gm, -d.iota_in / kappa_, chi_);

    const double Ke = ripple_.K_eps();
    const double dK = grid_.dK();
    const double e = p_.eps;
    auto Tsym = [&](double K) { return -e * e * p_.ceps2() * K * K + lambda_plus(e * K, p_.w); };
    const Spectrum G = transform(grid_, gm);
    Spectrum U(grid_.N);
    d.min_symbol = INFINITY;
    for (int n = 0; n < grid_.N; ++n) {
        const double K = grid_.K[n];
        const bool near = std::abs(std::abs(K) - Ke) < 1e-3 * dK;
        if (near && n > 0 && n < grid_.N - 1 && n != grid_.N / 2 && n != grid_.N / 2 - 1) {
            // first-order limit of G/T at a wavenumber sitting on the zero of T
            U[n] = (G[n + 1] - G[n - 1]) / (Tsym(K + dK) - Tsym(K - dK));
            ++d.limit_points;
            continue;
        }
        const double t = T_[n].real();
        d.min_symbol = std::min(d.min_symbol, std::abs(t));
        U[n] = G[n] / t;
    }
    auto u = inverse_real(grid_, U);
    auto r = T_apply(u);
    for (int j = 0; j < grid_.N; ++j) r[j] -= gm[j];
    d.residual = sup_norm(r) / gs;
    d.iota_after = iota(r);
    d.parity_defect = rel_parity_defect(u, Parity::odd, grid_);
    if (info) *info = d;
    if (!(d.residual < 1e-7)) {
        std::ostringstream os;
        os << "P_eps residual " << d.residual << " exceeds 1e-7 (smallest |T| " << d.min_symbol
           << ", limit points " << d.limit_points << ", iota " << d.iota_in << ")";
        throw std::runtime_error(os.str());
    }
    return symmetrize(u, Parity::odd, grid_);
}

ForcingTerms NanopteronSolver::assemble(const NanopteronState& s, const RippleSolution& rip) const
{
    const int N = grid_.N;
    if (rel_parity_defect(s.eta1.values, Parity::even, grid_) > 1e-9)
        throw std::invalid_argument("state eta1 is not even");
    if (rel_parity_defect(s.eta2.values, Parity::odd, grid_) > 1e-9)
        throw std::invalid_argument("state eta2 is not odd");
    const std::vector<double> zero(N, 0.0);
    ForcingTerms t;
    for (auto& v : t.j) v = zero;
    for (auto& v : t.l) v = zero;
    t.l31 = zero;
    t.j[0] = j1_;
    t.l[0] = l1_;

    const Pair sig{sigma_, zero};
    const Pair eta{s.eta1.values, s.eta2.values};
    const bool eta_zero = is_zero(eta[0]) && is_zero(eta[1]);
    if (!eta_zero) {
        const auto bse = bilinear(sig, eta);
        const auto b1 = with_symbol(vp_, bse[0]);
        std::vector<double> se(N);
        for (int j = 0; j < N; ++j) se[j] = sigma_[j] * eta[0][j];
        const auto s0 = apply_sampled(vp0_, se, grid_);
        const double s4 = 4.0 * (1.0 + p_.w);
        for (int j = 0; j < N; ++j) t.j[1][j] = -(2.0 * b1[j] - s4 * s0[j]);
        t.l[1] = with_symbol(lp_, bse[1]);
        for (double& v : t.l[1]) v *= -2.0;

        const auto bee = bilinear(eta, eta);
        t.j[4] = with_symbol(vp_, bee[0]);
        t.l[4] = with_symbol(lp_, bee[1]);
        for (int j = 0; j < N; ++j) {
            t.j[4][j] = -t.j[4][j];
            t.l[4][j] = -t.l[4][j];
        }
    }
    const double a = s.a;
    if (a != 0.0) {
        const CoeffPair phi = rip.phi();
        const double om = rip.K_eps_a;
        const auto mS = eval_mixed(mix(S_, phi, om), true, true);
        for (int j = 0; j < N; ++j) {
            t.j[2][j] = -2.0 * a * mS[0][j];
            t.l[2][j] = -2.0 * a * mS[1][j];
            t.l31[j] = -2.0 * a * t1_[j] - 2.0 * a * (mS[1][j] - nuS_[j]);
        }
        if (!eta_zero) {
            const auto mE = eval_mixed(mix(apply_J2(eta), phi, om), true, true);
            for (int j = 0; j < N; ++j) {
                t.j[3][j] = -2.0 * a * mE[0][j];
                t.l[3][j] = -2.0 * a * mE[1][j];
            }
        }
    }
    static const char* jn[] = {"j1", "j2", "j3", "j4", "j5"};
    static const char* ln[] = {"l1", "l2", "l3", "l4", "l5"};
    for (int i = 0; i < 5; ++i) {
        require_parity(t.j[i], Parity::even, grid_, jn[i]);
        require_parity(t.l[i], Parity::odd, grid_, ln[i]);
    }
    require_parity(t.l31, Parity::odd, grid_, "l31");
    return t;
}

StepResult NanopteronSolver::step(const NanopteronState& s, const RippleSolution& rip) const
{
    const int N = grid_.N;
    const auto t = assemble(s, rip);
    std::vector<double> js(N, 0.0), ls(N, 0.0);
    for (int i = 0; i < 5; ++i) axpy(js, 1.0, t.j[i]);
    axpy(ls, 1.0, t.l[0]);
    axpy(ls, 1.0, t.l[1]);
    axpy(ls, 1.0, t.l31);
    axpy(ls, 1.0, t.l[3]);
    axpy(ls, 1.0, t.l[4]);

    StepResult r;
    r.iota_ls = iota(ls);
    double abs_sum = 0.0;
    for (double v : ls) abs_sum += std::abs(v);
    r.iota_floor = 64.0 * DBL_EPSILON * abs_sum * grid_.dx;
    r.N3 = r.iota_ls / (2.0 * kappa_);
    r.parity_defect_1 = rel_parity_defect(js, Parity::even, grid_);

    const auto sol = A_.inverse(js);
    r.gmres_iterations = sol.iterations;
    std::vector<double> g = ls;
    for (double& v : g) v *= p_.eps * p_.eps;
    auto u2 = P_eps_solve(g, &r.p);
    r.parity_defect_2 = r.p.parity_defect;

    r.next.eta1.values = sol.u;
    r.next.eta1.parity = Parity::even;
    r.next.eta2.values = std::move(u2);
    r.next.eta2.parity = Parity::odd;
    r.next.a = (1.0 - cfg_.omega) * s.a + cfg_.omega * r.N3;
    return r;
}

CompositeResidual NanopteronSolver::composite_residual(const NanopteronState& s,
                                                       const RippleSolution& rip) const
{
    const int N = grid_.N;
    const double e2 = p_.eps * p_.eps;
    Pair Lv{sigma_, s.eta2.values};
    for (int j = 0; j < N; ++j) Lv[0][j] += s.eta1.values[j];
    const auto bll = bilinear(Lv, Lv);
    auto R1 = with_symbol(vp_, bll[0]);
    const auto lb = with_symbol(lp_, bll[1]);
    auto R2 = T_apply(Lv[1]);
    for (int j = 0; j < N; ++j) {
        R1[j] += Lv[0][j];
        R2[j] += e2 * lb[j];
    }
    if (s.a != 0.0) {
        const auto m = eval_mixed(mix(apply_J2(Lv), rip.phi(), rip.K_eps_a), true, true);
        for (int j = 0; j < N; ++j) {
            R1[j] += 2.0 * s.a * m[0][j];
            R2[j] += e2 * 2.0 * s.a * m[1][j];
        }
    }
    CompositeResidual c;
    c.theta1 = sup_norm(R1);
    c.theta2 = sup_norm(R2);
    const double scale = sup_norm(Lv[0]);
    c.theta1_rel = c.theta1 / scale;
    c.theta2_rel = c.theta2 / scale;
    c.periodic = rip.residual;
    return c;
}

NanopteronResult iterate_nanopteron(const NanopteronSolver& solver)
{
    const auto& cfg = solver.config();
    const Grid& g = solver.grid();
    NanopteronResult res;
    NanopteronState s = solver.zero_state();
    RippleSolution rip = solver.ripple(0.0);
    SolveReport& rep = res.report;
    double min_upd = INFINITY;
    double amp_floor = 0.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (s.a != rip.a) rip = solver.ripple(s.a);
        const StepResult st = solver.step(s, rip);
        double upd = std::abs(st.N3 - s.a);
        double d1 = 0.0, d2 = 0.0;
        for (int j = 0; j < g.N; ++j) {
            d1 = std::max(d1, std::abs(st.next.eta1.values[j] - s.eta1.values[j]));
            d2 = std::max(d2, std::abs(st.next.eta2.values[j] - s.eta2.values[j]));
        }
        upd += d1 + d2;
        amp_floor = st.iota_floor / (2.0 * std::abs(solver.kappa()));
        const bool amp_ok =
            std::abs(st.N3 - s.a) <= std::max(cfg.amplitude_rel_tol * std::abs(st.N3), amp_floor);
        rep.parity_defect_1 = std::max(rep.parity_defect_1, st.parity_defect_1);
        rep.parity_defect_2 = std::max(rep.parity_defect_2, st.parity_defect_2);
        rep.p_residual = std::max(rep.p_residual, st.p.residual);
        s = st.next;
        rep.update_history.push_back(upd);
        rep.iterations = it + 1;
        rep.final_update_norm = upd;
        if (!std::isfinite(upd) || upd > 5.0 * min_upd) {
            std::ostringstream os;
            os << "nanopteron iteration diverged at step " << it + 1 << "; update history:";
            for (double h : rep.update_history) os << ' ' << h;
            throw std::runtime_error(os.str());
        }
        min_upd = std::min(min_upd, upd);
        if (upd < cfg.tol && amp_ok) {
            rep.converged = true;
            break;
        }
    }
    if (s.a != rip.a) rip = solver.ripple(s.a);

    // Evaluate the amplitude equation once more at the returned state.
    const StepResult fin = solver.step(s, rip);
    const double two_a_kappa = 2.0 * s.a * solver.kappa();
    rep.amplitude_defect = std::abs(fin.iota_ls - two_a_kappa);
    rep.iota_floor = fin.iota_floor;
    rep.amplitude_consistency =
        rep.amplitude_defect /
        std::max({std::abs(fin.iota_ls), std::abs(two_a_kappa), fin.iota_floor});

    rep.theta_residual = solver.composite_residual(s, rip);
    rep.a_value = s.a;
    const DimerParams& p = solver.params();
    rep.weight_q = 0.5 * p.q0;
    for (int r = 0; r <= 2; ++r) {
        const double n1 = weighted_norm(s.eta1.values, r, rep.weight_q, g);
        const double n2 = weighted_norm(s.eta2.values, r, rep.weight_q, g);
        rep.eta_norms[r] = std::sqrt(n1 * n1 + n2 * n2);
    }
    rep.eta_sup = std::max(sup_norm(s.eta1.values), sup_norm(s.eta2.values));
    rep.kappa_eps = solver.kappa();
    rep.kappa_star = solver.kappa_star();
    rep.K_eps = solver.K_eps();
    rep.K_eps_a = rip.K_eps_a;
    rep.boundary_eta1 = boundary_ratio(s.eta1.values);
    rep.boundary_eta2 = boundary_ratio(s.eta2.values);
    rep.decay_rate_fit = fit_decay_rate(s.eta1.values, g);
    rep.ripple_iterations = rip.iterations;
    rep.ripple_residual = rip.residual;
    s.eta1.decay_rate = rep.decay_rate_fit;
    s.eta2.decay_rate = fit_decay_rate(s.eta2.values, g);
    res.state = std::move(s);
    res.ripple = std::move(rip);
    return res;
}

namespace {

LatticeWaveProfile make_profile(const NanopteronSolver& solver, const Pair& theta, double a,
                                const RippleSolution* rip)
{
    const DimerParams& p = solver.params();
    const Grid& g = solver.grid();
    const double e2 = p.eps * p.eps;
    LatticeWaveProfile prof;
    prof.eps = p.eps;
    prof.w = p.w;
    prof.c_eps = p.c_eps;
    prof.L = g.L;
    prof.N = g.N;
    const Pair J = solver.apply_J2(theta);
    for (int c = 0; c < 2; ++c) {
        prof.loc_hat[c] = transform(g, J[c]);
        for (auto& v : prof.loc_hat[c]) v *= e2;
    }
    const double Ka = rip ? rip->K_eps_a : solver.K_eps();
    prof.K_a = Ka;
    prof.P_eps = rip ? 2.0 * std::numbers::pi / (p.eps * Ka) : 0.0;
    if (rip && a != 0.0) {
        const CoeffPair phi = rip->phi();
        const int M = rip->M;
        prof.per = {std::vector<cplx>(2 * M + 1), std::vector<cplx>(2 * M + 1)};
        for (int m = -M; m <= M; ++m) {
            const Mat2 Jm = J2(p.eps * Ka * m, p.w);
            const cplx c0 = phi[0][m + M], c1 = phi[1][m + M];
            prof.per[0][m + M] = e2 * a * (Jm.a * c0 + Jm.b * c1);
            prof.per[1][m + M] = e2 * a * (Jm.c * c0 + Jm.d * c1);
        }
    }
    return prof;
}

}  // namespace

LatticeWaveProfile descale(const NanopteronSolver& solver, const NanopteronState& s,
                           const RippleSolution& rip)
{
    Pair theta{solver.sigma(), s.eta2.values};
    for (std::size_t j = 0; j < theta[0].size(); ++j) theta[0][j] += s.eta1.values[j];
    return make_profile(solver, theta, s.a, &rip);
}

LatticeWaveProfile descale_leading(const NanopteronSolver& solver)
{
    const Pair theta{solver.sigma(), std::vector<double>(solver.sigma().size(), 0.0)};
    auto prof = make_profile(solver, theta, 0.0, nullptr);
    prof.approximate = true;
    return prof;
}

double LatticeWaveProfile::eval(int component, double x, int order) const
{
    return eval_localized(component, x, order) + eval_periodic(component, x, order);
}

double LatticeWaveProfile::eval_localized(int component, double x, int order) const
{
    const double X = eps * x;
    double v = 0.0;
    if (std::abs(X) < L) {
        const Spectrum& F = loc_hat[component];
        const double dK = std::numbers::pi / L;
        const cplx z = std::polar(1.0, dK * (X + L));
        cplx zn = 1.0;
        cplx s = order == 0 ? F[0] : cplx(0.0);
        for (int n = 1; n < N / 2; ++n) {
            zn *= z;
            const double K = n * dK;
            if (order == 0)
                s += F[n] * zn + F[N - n] * std::conj(zn);
            else
                s += cplx(0.0, K * eps) * (F[n] * zn - F[N - n] * std::conj(zn));
        }
        const double Kny = (N / 2) * dK;
        const double nyq = F[N / 2].real();
        s += order == 0 ? nyq * std::cos(Kny * (X + L)) : -nyq * Kny * eps * std::sin(Kny * (X + L));
        v += s.real() / N;
    }
    return v;
}

double LatticeWaveProfile::eval_periodic(int component, double x, int order) const
{
    const double X = eps * x;
    double v = 0.0;
    const auto& c = per[component];
    if (!c.empty()) {
        const int M = static_cast<int>(c.size() / 2);
        cplx s = 0.0;
        for (int m = -M; m <= M; ++m) {
            cplx t = c[m + M] * std::polar(1.0, m * K_a * X);
            if (order == 1) t *= cplx(0.0, m * K_a * eps);
            s += t;
        }
        v += s.real();
    }
    return v;
}

std::vector<double> LatticeWaveProfile::eval_uniform(int component, double x0, double h, int n,
                                                     int order) const
{
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = eval(component, x0 + i * h, order);
    return out;
}

std::pair<double, double> ripple_period_interval(double w)
{
    const double cw = std::sqrt(sound_speed_sq(w));
    const double tp = 2.0 * std::numbers::pi;
    return {tp * cw / std::sqrt(2.0 + 2.0 * w), tp * std::sqrt(cw * cw + 1.0) / std::sqrt(2.0 * w)};
}

}  // namespace npt
