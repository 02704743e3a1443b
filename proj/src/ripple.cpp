#include "npt/ripple.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace npt {

KepsRoot find_Keps(const DimerParams& p)
{
    const KcRoot kc = find_kc(p.c_eps, p.w);
    KepsRoot r;
    r.K = kc.k / p.eps;
    const double e2 = p.eps * p.eps;
    r.residual = std::abs(-e2 * p.ceps2() * r.K * r.K + lambda_plus(p.eps * r.K, p.w));
    const double h = 1e-7;
    const double k0 = p.eps * r.K;
    r.xi_prime = (xi_c(k0 + h, p.c_eps, p.w) - xi_c(k0 - h, p.c_eps, p.w)) / (2.0 * h);
    return r;
}

CoeffPair RippleSolution::phi() const
{
    CoeffPair f = RippleProblem::nu(M);
    for (int i = 0; i < 2 * M + 1; ++i) {
        f[0][i] += psi1.coeffs[i];
        f[1][i] += psi2.coeffs[i];
    }
    return f;
}

RippleProblem::RippleProblem(const DimerParams& p, int M) : p_(p), M_(M), root_(find_Keps(p))
{
    if (M < 2) throw std::invalid_argument("ripple truncation needs M >= 2");
}

CoeffPair RippleProblem::nu(int M)
{
    CoeffPair f{std::vector<cplx>(2 * M + 1, 0.0), std::vector<cplx>(2 * M + 1, 0.0)};
    f[1][M + 1] = cplx(0.0, -0.5);
    f[1][M - 1] = cplx(0.0, 0.5);
    return f;
}

RippleProblem::State RippleProblem::zero_state() const
{
    State s;
    s.psi = {std::vector<cplx>(2 * M_ + 1, 0.0), std::vector<cplx>(2 * M_ + 1, 0.0)};
    return s;
}

double RippleProblem::xi(double k) const { return xi_c(k, p_.c_eps, p_.w); }

double RippleProblem::R_eps(double tau) const
{
    const double k0 = p_.eps * root_.K;
    if (std::abs(tau) < 1e-6) {
        const double h = 1e-4;
        return (xi(k0 + h) - 2.0 * xi(k0) + xi(k0 - h)) / (2.0 * h * h);
    }
    return (xi(k0 + tau) - root_.xi_prime * tau) / (tau * tau);
}

std::array<std::vector<cplx>, 2> RippleProblem::bilinear(const CoeffPair& f, const CoeffPair& g,
                                                         double omega, int out_modes) const
{
    const int n = 2 * M_ + 1;
    std::array<std::vector<cplx>, 2> Jf{std::vector<cplx>(n), std::vector<cplx>(n)};
    std::array<std::vector<cplx>, 2> Jg{std::vector<cplx>(n), std::vector<cplx>(n)};
    for (int m = -M_; m <= M_; ++m) {
        const Mat2 J = J2(p_.eps * omega * m, p_.w);
        const int i = m + M_;
        Jf[0][i] = J.a * f[0][i] + J.b * f[1][i];
        Jf[1][i] = J.c * f[0][i] + J.d * f[1][i];
        Jg[0][i] = J.a * g[0][i] + J.b * g[1][i];
        Jg[1][i] = J.c * g[0][i] + J.d * g[1][i];
    }
    const int no = 2 * out_modes + 1;
    std::array<std::vector<cplx>, 2> prod{std::vector<cplx>(no, 0.0), std::vector<cplx>(no, 0.0)};
    for (int m1 = -M_; m1 <= M_; ++m1) {
        const cplx a0 = Jf[0][m1 + M_], a1 = Jf[1][m1 + M_];
        if (a0 == cplx(0.0) && a1 == cplx(0.0)) continue;
        const int lo = std::max(-M_, -out_modes - m1), hi = std::min(M_, out_modes - m1);
        for (int m2 = lo; m2 <= hi; ++m2) {
            prod[0][m1 + m2 + out_modes] += a0 * Jg[0][m2 + M_];
            prod[1][m1 + m2 + out_modes] += a1 * Jg[1][m2 + M_];
        }
    }
    for (int m = -out_modes; m <= out_modes; ++m) {
        const Mat2 J = J1(p_.eps * omega * m, p_.w);
        const int i = m + out_modes;
        const cplx x = prod[0][i], y = prod[1][i];
        prod[0][i] = J.a * x + J.b * y;
        prod[1][i] = J.c * x + J.d * y;
    }
    return prod;
}

RippleProblem::State RippleProblem::psi_map(const State& s, double a) const
{
    const double e = p_.eps;
    const double omega = root_.K + s.t;
    CoeffPair phi = nu(M_);
    for (int i = 0; i < 2 * M_ + 1; ++i) {
        phi[0][i] += s.psi[0][i];
        phi[1][i] += s.psi[1][i];
    }
    const auto b = bilinear(phi, phi, omega, M_);
    State out = zero_state();
    cplx lpb2_1 = 0.0;
    for (int m = -M_; m <= M_; ++m) {
        const int i = m + M_;
        const double K = omega * m;
        out.psi[0][i] = -a * varpi_eps(K, p_) * b[0][i];
        const cplx lpb2 = lambda_plus(e * K, p_.w) * b[1][i];
        if (m == 1) lpb2_1 = lpb2;
        if (std::abs(m) == 1) continue;
        const double x = xi(e * K);
        if (std::abs(x) < 1e-12) {
            std::ostringstream os;
            os << "xi vanishes at ripple mode " << m << " (|xi| = " << std::abs(x) << ")";
            throw std::runtime_error(os.str());
        }
        out.psi[1][i] = -a * e * e * lpb2 / x;
    }
    const double xp = root_.xi_prime;
    const cplx t3 = -(e / xp) * R_eps(e * s.t) * s.t * s.t -
                    (2.0 * cplx(0.0, 1.0) * e * a / xp) * lpb2_1;
    out.t = t3.real();
    return out;
}

double RippleProblem::residual(const CoeffPair& phi, double a, double omega) const
{
    CoeffPair f = phi;
    for (auto& comp : f)
        for (auto& v : comp) v *= a;
    const int M2 = 2 * M_;
    const auto b = bilinear(f, f, omega, M2);
    const double e = p_.eps;
    double r = 0.0;
    for (int m = -M2; m <= M2; ++m) {
        const int i = m + M2;
        const double K = omega * m;
        const cplx f1 = std::abs(m) <= M_ ? f[0][m + M_] : cplx(0.0);
        const cplx f2 = std::abs(m) <= M_ ? f[1][m + M_] : cplx(0.0);
        const cplx r1 = f1 + varpi_eps(K, p_) * b[0][i];
        const cplx r2 = xi(e * K) * f2 + e * e * lambda_plus(e * K, p_.w) * b[1][i];
        r += std::abs(r1) + std::abs(r2);
    }
    return r;
}

RippleSolution RippleProblem::solve(double a, double tol, int max_iter) const
{
    RippleSolution sol;
    sol.a = a;
    sol.K_eps = root_.K;
    sol.M = M_;
    State s = zero_state();
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const State n = psi_map(s, a);
        double d = std::abs(n.t - s.t);
        double dpsi = 0.0;
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 2 * M_ + 1; ++i) dpsi = std::max(dpsi, std::abs(n.psi[c][i] - s.psi[c][i]));
        d += dpsi;
        s = n;
        sol.update_history.push_back(d);
        sol.iterations = it + 1;
        if (!std::isfinite(d)) break;
        if (d < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "ripple iteration did not converge for a = " << a << "; contraction ratios:";
        const auto& h = sol.update_history;
        for (std::size_t i = h.size() > 6 ? h.size() - 6 : 1; i < h.size(); ++i)
            os << ' ' << (h[i - 1] > 0 ? h[i] / h[i - 1] : 0.0);
        throw std::runtime_error(os.str());
    }
    sol.t_shift = s.t;
    sol.K_eps_a = root_.K + s.t;
    sol.psi1 = PeriodicFieldCoeffs(sol.K_eps_a, M_);
    sol.psi2 = PeriodicFieldCoeffs(sol.K_eps_a, M_);
    sol.psi1.coeffs = s.psi[0];
    sol.psi2.coeffs = s.psi[1];
    sol.psi1.parity = Parity::even;
    sol.psi2.parity = Parity::odd;
    sol.residual = residual(sol.phi(), a, sol.K_eps_a);
    return sol;
}

}  // namespace npt
