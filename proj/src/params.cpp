#include "npt/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace npt {

Mat2 operator*(const Mat2& x, const Mat2& y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

double max_abs_diff(const Mat2& x, const Mat2& y)
{
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b),
                     std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

double sound_speed_sq(double w) { return 2.0 * w / (1.0 + w); }

double kdv_alpha(double w)
{
    return sound_speed_sq(w) / 3.0 * (1.0 - w + w * w) / ((1.0 + w) * (1.0 + w));
}

DimerParams DimerParams::make(double w, double eps)
{
    if (!(w > 1.0))
        throw std::invalid_argument("mass ratio w must exceed 1, got " + std::to_string(w));
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1), got " + std::to_string(eps));
    DimerParams p;
    p.w = w;
    p.eps = eps;
    p.c_w = std::sqrt(sound_speed_sq(w));
    p.c_eps = std::sqrt(sound_speed_sq(w) + eps * eps);
    p.alpha_w = kdv_alpha(w);
    p.sigma0 = 3.0 / (8.0 * w);
    p.q0 = 1.0 / (2.0 * std::sqrt(p.alpha_w));
    return p;
}

double rho(double k, double w)
{
    const double c = std::cos(k);
    return std::sqrt((1.0 - w) * (1.0 - w) + 4.0 * w * c * c);
}

double lambda_minus(double k, double w)
{
    // 1+w-rho rewritten to avoid cancellation near k = 0.
    const double s = std::sin(k);
    return 4.0 * w * s * s / ((1.0 + w) + rho(k, w));
}

double lambda_plus(double k, double w) { return 1.0 + w + rho(k, w); }

std::pair<double, double> lambda_pm(double k, double w)
{
    return {lambda_minus(k, w), lambda_plus(k, w)};
}

cplx beta(double k, double w)
{
    return w * std::polar(1.0, k) + std::polar(1.0, -k);
}

cplx gamma(double k, double w)
{
    return std::polar(1.0, -k) + std::polar(1.0, k) * rho(k, w) / beta(k, w);
}

cplx normalizer(double k, double w)
{
    // beta = exp(ik)(w + exp(-2ik)) and Re(w + exp(-2ik)) > 0, so atan2 gives a continuous branch.
    const double theta = k + std::atan2(-std::sin(2.0 * k), w + std::cos(2.0 * k));
    return std::polar(2.0, -0.5 * theta);
}

Mat2 J2(double k, double w)
{
    const cplx n = normalizer(k, w);
    const cplx nb = n * beta(k, w);
    const cplx nr = n * rho(k, w);
    return {nb, nb, nr, -nr};
}

Mat2 J1(double k, double w)
{
    const cplx n = normalizer(k, w);
    const cplx ib = 1.0 / (2.0 * n * beta(k, w));
    const cplx ir = 1.0 / (2.0 * n * rho(k, w));
    return {ib, ir, ib, -ir};
}

Mat2 L_tilde(double k, double w)
{
    return {1.0 + w, -beta(k, w), -beta(-k, w), 1.0 + w};
}

namespace {

double sinc_sq(double k)
{
    if (std::abs(k) < 1e-4) return 1.0 - k * k / 3.0;
    const double s = std::sin(k) / k;
    return s * s;
}

// 1 - sin(k)^2/k^2; the power series is used where the direct form cancels.
double one_minus_sinc_sq(double k)
{
    if (std::abs(k) >= 0.5) return 1.0 - sinc_sq(k);
    // sin^2(k)/k^2 = sum_{n>=1} (-1)^{n+1} 2^{2n-1} k^{2n-2} / (2n)!
    const double k2 = k * k;
    double term = 1.0;  // 2^{2n-1} k^{2n-2}/(2n)! at n = 1
    double sum = 0.0;
    for (int n = 2; n <= 12; ++n) {
        term *= 4.0 * k2 / ((2.0 * n - 1.0) * (2.0 * n));
        sum += (n % 2 == 0) ? term : -term;
    }
    return sum;
}

}  // namespace

double lambda_minus_over_k2(double k, double w)
{
    return 4.0 * w * sinc_sq(k) / ((1.0 + w) + rho(k, w));
}

double cw2_minus_m(double k, double w)
{
    const double r = rho(k, w);
    const double d = 1.0 + w + r;
    const double s = std::sin(k);
    const double num = 2.0 * (1.0 + w) * one_minus_sinc_sq(k) - 4.0 * w * s * s / d;
    return 2.0 * w * num / ((1.0 + w) * d);
}

double varpi_c(double k, double c, double w)
{
    const double cw2 = sound_speed_sq(w);
    if (!(c * c > cw2))
        throw std::invalid_argument("varpi_c needs a supersonic speed c^2 > c_w^2");
    const double m = lambda_minus_over_k2(k, w);
    return -m / ((c * c - cw2) + cw2_minus_m(k, w));
}

double xi_c(double k, double c, double w) { return -c * c * k * k + lambda_plus(k, w); }

KcRoot find_kc(double c, double w)
{
    double lo = std::sqrt(2.0 * w) / c;
    double hi = std::sqrt(2.0 + 2.0 * w) / c;
    if (!(xi_c(lo, c, w) >= 0.0 && xi_c(hi, c, w) <= 0.0))
        throw std::runtime_error("xi_c has no sign change on the k_c bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (xi_c(mid, c, w) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    KcRoot r;
    r.k = 0.5 * (lo + hi);
    r.residual = std::abs(xi_c(r.k, c, w));
    const double lp_prime = -2.0 * w * std::sin(2.0 * r.k) / rho(r.k, w);
    r.slope = std::abs(2.0 * c * c * r.k - lp_prime);
    return r;
}

double varpi_eps(double K, const DimerParams& p)
{
    const double k = p.eps * K;
    const double m = lambda_minus_over_k2(k, p.w);
    return -p.eps * p.eps * m / (p.eps * p.eps + cw2_minus_m(k, p.w));
}

double varpi0(double K, const DimerParams& p) { return -p.cw2() / (1.0 + p.alpha_w * K * K); }

}  // namespace npt
