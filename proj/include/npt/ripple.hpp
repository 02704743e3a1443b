#pragma once

#include <array>
#include <vector>

#include "npt/params.hpp"
#include "npt/spectral.hpp"

namespace npt {

struct KepsRoot {
    double K = 0.0;
    double residual = 0.0;  // |-eps^2 c_eps^2 K^2 + lambda_+(eps K)|
    double xi_prime = 0.0;  // d/dk xi_{c_eps} at eps K, central difference
};

KepsRoot find_Keps(const DimerParams& p);

// Periodic pair (psi1 even, psi2 odd) in coefficient space, modes -M..M.
using CoeffPair = std::array<std::vector<cplx>, 2>;

struct RippleSolution {
    double a = 0.0;
    double K_eps = 0.0;
    double t_shift = 0.0;
    double K_eps_a = 0.0;
    int M = 32;
    PeriodicFieldCoeffs psi1;
    PeriodicFieldCoeffs psi2;
    int iterations = 0;
    double residual = 0.0;  // l1 norm over modes of the periodic residual of a phi
    std::vector<double> update_history;

    // phi = nu + psi with nu = (0, sin Y); coefficient pair at fundamental K_eps_a.
    CoeffPair phi() const;
};

class RippleProblem {
public:
    explicit RippleProblem(const DimerParams& p, int M = 32);

    struct State {
        CoeffPair psi;
        double t = 0.0;
    };

    State zero_state() const;
    State psi_map(const State& s, double a) const;
    RippleSolution solve(double a, double tol = 1e-12, int max_iter = 200) const;

    // Remainder of xi about eps K_eps.
    double R_eps(double tau) const;
    double xi(double k) const;  // xi_{c_eps}(k)

    // Residual of the periodic system for a phi at frequency omega; tails up to 2M included.
    double residual(const CoeffPair& phi, double a, double omega) const;

    // J1 (J2 f . J2 g) at frequency omega, convolution kept on modes |m| <= out_modes.
    std::array<std::vector<cplx>, 2> bilinear(const CoeffPair& f, const CoeffPair& g,
                                              double omega, int out_modes) const;

    const DimerParams& params() const { return p_; }
    int modes() const { return M_; }
    double K_eps() const { return root_.K; }
    double xi_prime() const { return root_.xi_prime; }

    static CoeffPair nu(int M);

private:
    DimerParams p_;
    int M_;
    KepsRoot root_;
};

}  // namespace npt
