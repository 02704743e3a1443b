#pragma once

#include <string>
#include <vector>

#include "npt/params.hpp"
#include "npt/spectral.hpp"

namespace npt {

struct KdvProfile {
    LocalizedField sigma;
    DimerParams params;

    // sigma0 sech^2(q0 X) on the grid.
    static KdvProfile build(const Grid& g, const DimerParams& p);
};

// Sup-norm of alpha sigma'' - sigma + 4 w sigma^2 with spectral derivatives.
double kdv_residual(const std::vector<double>& sigma, const Grid& g, const DimerParams& p);

// 2(1+w) (t1 u1 + t2 u2, t1 u2 + t2 u1)
Pair B0(const Pair& t, const Pair& u, const DimerParams& p);

// Sup-norm of sigma + varpi0 b1^0(sigma, sigma).
double sigma_identity_residual(const KdvProfile& prof, const Grid& g);

// 1 + 4(1+w) varpi0(sigma .) restricted to even functions.
class AOperator {
public:
    AOperator(const Grid& g, const DimerParams& p, std::vector<double> sigma);

    std::vector<double> apply(const std::vector<double>& f) const;
    // No parity guard; used by the Krylov solver and the odd-subspace diagnostics.
    std::vector<double> apply_raw(const std::vector<double>& f) const;

    struct Solution {
        std::vector<double> u;
        int iterations = 0;
        double residual = 0.0;  // sup |A u - g| / sup |g|
        std::string method;
    };
    Solution inverse(const std::vector<double>& g) const;

    // Smallest singular value of the dense matrix on the even or odd subspace.
    double smallest_singular_value(Parity p) const;

    static constexpr int dense_limit = 2048;

private:
    Solution solve_dense(const std::vector<double>& g) const;

    Grid grid_;
    DimerParams p_;
    std::vector<double> sigma_;
    Spectrum symbol_;  // 4(1+w) varpi0 on the grid
};

}  // namespace npt
