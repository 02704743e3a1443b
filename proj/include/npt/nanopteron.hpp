#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "npt/kdv.hpp"
#include "npt/params.hpp"
#include "npt/ripple.hpp"
#include "npt/spectral.hpp"

namespace npt {

struct NanopteronConfig {
    double tol = 1e-11;
    int max_iter = 200;
    double omega = 0.5;  // amplitude damping
    int ripple_modes = 32;
    double ripple_tol = 1e-13;
    int ripple_max_iter = 200;
    // Stop only once |N3 - a| is below this fraction of |N3| (or at the roundoff floor).
    double amplitude_rel_tol = 1e-10;
};

struct NanopteronState {
    LocalizedField eta1;  // even
    LocalizedField eta2;  // odd
    double a = 0.0;
};

struct ForcingTerms {
    std::array<std::vector<double>, 5> j;  // even
    std::array<std::vector<double>, 5> l;  // odd
    std::vector<double> l31;               // l3 + 2 a chi, from its own formula
};

struct PSolveInfo {
    double iota_in = 0.0;      // iota of the right side before the chi subtraction
    double residual = 0.0;     // sup |T u - g_mod| / sup |g|
    double iota_after = 0.0;   // iota of T u - g_mod
    double min_symbol = 0.0;   // smallest |T(K_n)| used in a division
    int limit_points = 0;      // grid wavenumbers within 1e-3 dK of +-K_eps
    double parity_defect = 0.0;  // of the raw solution, relative
};

struct StepResult {
    NanopteronState next;
    double N3 = 0.0;
    double iota_ls = 0.0;        // iota of l1 + l2 + l31 + l4 + l5
    double iota_floor = 0.0;     // roundoff scale of that quadrature
    double parity_defect_1 = 0.0;  // before symmetrization, relative
    double parity_defect_2 = 0.0;
    int gmres_iterations = 0;
    PSolveInfo p;
};

struct CompositeResidual {
    double theta1 = 0.0;  // sup-norm, first component
    double theta2 = 0.0;
    double theta1_rel = 0.0;
    double theta2_rel = 0.0;
    double periodic = 0.0;  // ripple residual in coefficient space
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    double final_update_norm = 0.0;
    std::vector<double> update_history;
    CompositeResidual theta_residual;
    double a_value = 0.0;
    std::array<double, 3> eta_norms{};  // weighted norms r = 0,1,2 of (eta1, eta2)
    double weight_q = 0.0;
    double eta_sup = 0.0;
    double kappa_eps = 0.0;
    double kappa_star = 0.0;
    double K_eps = 0.0;
    double K_eps_a = 0.0;
    double boundary_eta1 = 0.0;
    double boundary_eta2 = 0.0;
    double parity_defect_1 = 0.0;
    double parity_defect_2 = 0.0;
    double amplitude_consistency = 0.0;
    double amplitude_defect = 0.0;  // |iota - 2 a kappa|
    double iota_floor = 0.0;        // roundoff level of iota on this grid
    double decay_rate_fit = 0.0;
    int ripple_iterations = 0;
    double ripple_residual = 0.0;
    double p_residual = 0.0;
};

class NanopteronSolver {
public:
    NanopteronSolver(const DimerParams& p, const Grid& g, NanopteronConfig cfg = {});

    const DimerParams& params() const { return p_; }
    const Grid& grid() const { return grid_; }
    const NanopteronConfig& config() const { return cfg_; }
    const std::vector<double>& sigma() const { return sigma_; }
    const std::vector<double>& chi() const { return chi_; }
    double kappa() const { return kappa_; }
    double kappa_star() const { return kappa_star_; }
    double K_eps() const { return ripple_.K_eps(); }
    const AOperator& A() const { return A_; }
    const RippleProblem& ripple_problem() const { return ripple_; }

    NanopteronState zero_state() const;
    RippleSolution ripple(double a) const;

    double iota(const std::vector<double>& f) const;
    std::vector<double> T_apply(const std::vector<double>& u) const;
    // T^{-1}(g - iota(g)/kappa chi) for odd g.
    std::vector<double> P_eps_solve(const std::vector<double>& g, PSolveInfo* info = nullptr) const;

    ForcingTerms assemble(const NanopteronState& s, const RippleSolution& rip) const;
    StepResult step(const NanopteronState& s, const RippleSolution& rip) const;
    CompositeResidual composite_residual(const NanopteronState& s, const RippleSolution& rip) const;

    // Even/odd pair J2^eps applied to a real pair.
    Pair apply_J2(const Pair& f) const;

private:
    struct Mixed {
        double omega;
        Spectrum h1, h2;  // J1 at the shifted wavenumbers already applied
    };
    std::vector<Mixed> mix(const Pair& Jf, const CoeffPair& c, double omega) const;
    Pair eval_mixed(const std::vector<Mixed>& m, bool first, bool second) const;
    std::array<Spectrum, 2> bilinear(const Pair& f, const Pair& g) const;
    std::vector<double> with_symbol(const Spectrum& sym, const Spectrum& F) const;

    DimerParams p_;
    Grid grid_;
    NanopteronConfig cfg_;
    RippleProblem ripple_;
    std::vector<double> sigma_;
    std::vector<Mat2> J2K_, J1K_;
    Spectrum lp_, vp_, vp0_, T_;
    std::vector<double> sinKX_;
    AOperator A_;
    Pair S_, S0_;
    std::vector<double> j1_, l1_, chi_, t1_, nuS_;
    double kappa_ = 0.0;
    double kappa_star_ = 0.0;
};

struct NanopteronResult {
    NanopteronState state;
    RippleSolution ripple;
    SolveReport report;
};

// Iterates N from the zero state. Throws on divergence (update norm 5x above its minimum)
// with the iterate history in the message.
NanopteronResult iterate_nanopteron(const NanopteronSolver& solver);

// Relative-displacement profiles of the lattice wave as functions of x = j - c t.
struct LatticeWaveProfile {
    double eps = 0.0;
    double w = 0.0;
    double c_eps = 0.0;
    double P_eps = 0.0;  // ripple period in lattice units, 0 when there is no ripple
    bool approximate = false;  // leading-order data only

    // component 0 -> p1 (odd sites), 1 -> p2 (even sites); derivative order 0 or 1
    double eval(int component, double x, int order = 0) const;
    double eval_localized(int component, double x, int order = 0) const;
    double eval_periodic(int component, double x, int order = 0) const;
    // Values at x0 + i h for i < n.
    std::vector<double> eval_uniform(int component, double x0, double h, int n, int order = 0) const;

    // Localized part: transform of J2^eps applied to the localized part of theta on the grid.
    double L = 0.0;
    int N = 0;
    std::array<Spectrum, 2> loc_hat;
    // Periodic part: coefficients of a J2^eps phi at fundamental K_a (in X).
    double K_a = 0.0;
    std::array<std::vector<cplx>, 2> per;
};

LatticeWaveProfile descale(const NanopteronSolver& solver, const NanopteronState& s,
                           const RippleSolution& rip);
// theta = (sigma, 0) only.
LatticeWaveProfile descale_leading(const NanopteronSolver& solver);

// Closed interval containing the ripple period for mass ratio w.
std::pair<double, double> ripple_period_interval(double w);

}  // namespace npt
