#pragma once

#include <complex>
#include <utility>

namespace npt {

using cplx = std::complex<double>;

// Dense 2x2 complex matrix, row major: [[a, b], [c, d]].
struct Mat2 {
    cplx a, b, c, d;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
inline Mat2 diag(cplx p, cplx q) { return {p, 0.0, 0.0, q}; }
double max_abs_diff(const Mat2& x, const Mat2& y);

struct DimerParams {
    double w = 2.0;
    double eps = 0.1;
    double c_w = 0.0;
    double c_eps = 0.0;
    double alpha_w = 0.0;
    double sigma0 = 0.0;
    double q0 = 0.0;

    // Throws std::invalid_argument unless w > 1 and 0 < eps < 1.
    static DimerParams make(double w, double eps);

    double cw2() const { return c_w * c_w; }
    double ceps2() const { return c_eps * c_eps; }
};

// Mass-ratio-only constants, usable without an eps.
double sound_speed_sq(double w);
double kdv_alpha(double w);

double rho(double k, double w);
std::pair<double, double> lambda_pm(double k, double w);
double lambda_minus(double k, double w);
double lambda_plus(double k, double w);
cplx beta(double k, double w);

// The normalizer exp(-ik) + exp(ik) rho/beta exactly as written; it vanishes at k = pi (mod 2pi).
cplx gamma(double k, double w);

// Normalizer used by J1/J2: 2 exp(-i theta(k)/2) with beta = rho exp(i theta) and theta the
// continuous odd lift. Nonvanishing on the whole line, equals gamma near k = 0 to O(k^2),
// and satisfies n(-k) beta(-k) = n(k) rho(k).
cplx normalizer(double k, double w);

Mat2 J2(double k, double w);
Mat2 J1(double k, double w);
Mat2 L_tilde(double k, double w);

// lambda_-(k) = k^2 m(k); m(0) = c_w^2.
double lambda_minus_over_k2(double k, double w);
// c_w^2 - m(k), computed without cancellation near k = 0.
double cw2_minus_m(double k, double w);

double varpi_c(double k, double c, double w);
double xi_c(double k, double c, double w);

struct KcRoot {
    double k = 0.0;
    double residual = 0.0;  // |xi_c(k)|
    double slope = 0.0;     // |2 c^2 k - lambda_+'(k)|
};

// Unique root of xi_c on [sqrt(2w)/c, sqrt(2+2w)/c] by bisection. Throws if no sign change.
KcRoot find_kc(double c, double w);

double varpi_eps(double K, const DimerParams& p);
double varpi0(double K, const DimerParams& p);

}  // namespace npt
