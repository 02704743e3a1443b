#include "npt/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "npt/kernels.hpp"

namespace npt {

namespace {
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

const char* parity_name(Parity p)
{
    switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "none";
    }
}

Grid::Grid(double half_length, int n_points) : L(half_length), N(n_points)
{
    if (!(L > 0.0)) throw std::invalid_argument("grid half-length must be positive");
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("grid size must be even and >= 8");
    dx = 2.0 * L / N;
    X.resize(N);
    K.resize(N);
    const double dk = std::numbers::pi / L;
    for (int j = 0; j < N; ++j) {
        X[j] = -L + j * dx;
        K[j] = dk * (j < N / 2 ? j : j - N);
    }
}

double Grid::dK() const { return std::numbers::pi / L; }
double Grid::k_max() const { return std::numbers::pi / dx; }

std::vector<double> Grid::sorted_wavenumbers() const
{
    std::vector<double> s = K;
    std::sort(s.begin(), s.end());
    return s;
}

int Grid::resolve_points(double half_length, int n, double K)
{
    while (std::numbers::pi * n / (2.0 * half_length) < 5.0 * K) n *= 2;
    return n;
}

Fft::Fft(int n) : n_(n)
{
    std::vector<cplx> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(const cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::inverse(const cplx* in, cplx* out) const
{
    fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] *= s;
}

std::shared_ptr<const Fft> Fft::get(int n)
{
    static std::mutex m;
    static std::map<int, std::shared_ptr<const Fft>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const Fft>(n);
    return slot;
}

PeriodicFieldCoeffs::PeriodicFieldCoeffs(double fundamental, int modes)
    : K(fundamental), M(modes), coeffs(static_cast<std::size_t>(2 * modes + 1), cplx(0.0))
{
}

double PeriodicFieldCoeffs::eval(double X) const
{
    cplx s = 0.0;
    for (int m = -M; m <= M; ++m) s += at(m) * std::polar(1.0, m * K * X);
    return s.real();
}

double PeriodicFieldCoeffs::reality_defect() const
{
    double d = 0.0;
    for (int m = 0; m <= M; ++m) d = std::max(d, std::abs(at(-m) - std::conj(at(m))));
    return d;
}

Spectrum sample_symbol(const SymbolFn& sym, const Grid& g, double shift)
{
    Spectrum s(g.N);
    for (int n = 0; n < g.N; ++n) s[n] = sym(g.K[n] + shift);
    if (shift == 0.0) {
        const int ny = g.N / 2;
        s[ny] = 0.5 * (sym(g.K[ny]) + sym(-g.K[ny]));
    }
    return s;
}

void check_finite(const Spectrum& sym, const Grid& g, double shift)
{
    for (int n = 0; n < g.N; ++n) {
        if (!std::isfinite(sym[n].real()) || !std::isfinite(sym[n].imag())) {
            std::ostringstream os;
            os << "symbol is not finite at wavenumber " << g.K[n] + shift;
            throw std::domain_error(os.str());
        }
    }
}

Spectrum transform(const Grid& g, const std::vector<cplx>& f)
{
    Spectrum F(g.N);
    Fft::get(g.N)->forward(f.data(), F.data());
    return F;
}

Spectrum transform(const Grid& g, const std::vector<double>& f)
{
    std::vector<cplx> c(f.begin(), f.end());
    return transform(g, c);
}

std::vector<cplx> inverse(const Grid& g, const Spectrum& F)
{
    std::vector<cplx> f(g.N);
    Fft::get(g.N)->inverse(F.data(), f.data());
    return f;
}

std::vector<double> inverse_real(const Grid& g, const Spectrum& F)
{
    const auto c = inverse(g, F);
    std::vector<double> r(g.N);
    for (int i = 0; i < g.N; ++i) r[i] = c[i].real();
    return r;
}

void multiply_inplace(const Spectrum& sym, Spectrum& F)
{
    kernels::active().cmul(sym.data(), F.data(), F.data(), F.size());
}

namespace {
Parity combine(Parity sym, Parity f)
{
    if (sym == Parity::none || f == Parity::none) return Parity::none;
    if (sym == Parity::even) return f;
    return f == Parity::even ? Parity::odd : Parity::even;
}
}  // namespace

std::vector<double> apply_sampled(const Spectrum& sym, const std::vector<double>& f,
                                  const Grid& g)
{
    Spectrum F = transform(g, f);
    multiply_inplace(sym, F);
    return inverse_real(g, F);
}

LocalizedField apply_multiplier_localized(const SymbolFn& sym, const LocalizedField& f,
                                          const Grid& g, Parity sym_parity)
{
    const Spectrum s = sample_symbol(sym, g);
    check_finite(s, g, 0.0);
    LocalizedField out;
    out.values = apply_sampled(s, f.values, g);
    out.parity = combine(sym_parity, f.parity);
    out.decay_rate = f.decay_rate;
    return out;
}

PeriodicFieldCoeffs apply_multiplier_periodic(const SymbolFn& sym, const PeriodicFieldCoeffs& f,
                                              Parity sym_parity)
{
    PeriodicFieldCoeffs out = f;
    for (int m = -f.M; m <= f.M; ++m) {
        const cplx v = sym(m * f.K);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "symbol is not finite at wavenumber " << m * f.K;
            throw std::domain_error(os.str());
        }
        out.at(m) = v * f.at(m);
    }
    out.parity = combine(sym_parity, f.parity);
    return out;
}

std::vector<cplx> apply_multiplier_modulated(const SymbolFn& sym, const std::vector<double>& f,
                                             double omega, const Grid& g)
{
    const Spectrum s = sample_symbol(sym, g, omega);
    check_finite(s, g, omega);
    Spectrum F = transform(g, f);
    multiply_inplace(s, F);
    auto out = inverse(g, F);
    for (int j = 0; j < g.N; ++j) out[j] *= std::polar(1.0, omega * g.X[j]);
    return out;
}

CarrierSum product_mixed(const std::vector<double>& f, const PeriodicFieldCoeffs& pg,
                         const Grid& g)
{
    if (g.k_max() < 5.0 * pg.K)
        throw std::invalid_argument("grid does not resolve the periodic fundamental");
    CarrierSum out;
    std::vector<cplx> tmp(g.N);
    for (int m = -pg.M; m <= pg.M; ++m) {
        const cplx c = pg.at(m);
        if (c == cplx(0.0)) continue;
        for (int j = 0; j < g.N; ++j) tmp[j] = f[j] * c;
        out.push_back({m * pg.K, transform(g, tmp)});
    }
    return out;
}

CarrierSum apply_multiplier_carriers(const SymbolFn& sym, const CarrierSum& c, const Grid& g)
{
    CarrierSum out = c;
    for (auto& term : out) {
        const Spectrum s = sample_symbol(sym, g, term.omega);
        check_finite(s, g, term.omega);
        multiply_inplace(s, term.hat);
    }
    return out;
}

std::vector<double> evaluate_carriers(const CarrierSum& c, const Grid& g)
{
    std::vector<double> out(g.N, 0.0);
    for (const auto& term : c) {
        const auto v = inverse(g, term.hat);
        for (int j = 0; j < g.N; ++j)
            out[j] += (std::polar(1.0, term.omega * g.X[j]) * v[j]).real();
    }
    return out;
}

double trapezoid(const std::vector<double>& f, const Grid& g)
{
    double s = 0.0;
    for (double v : f) s += v;
    return s * g.dx;
}

IotaResult iota_quadrature(const std::vector<double>& f, double K, const Grid& g)
{
    IotaResult r;
    double s = 0.0;
    for (int j = 0; j < g.N; ++j) s += f[j] * std::sin(K * g.X[j]);
    r.value = s * g.dx;
    r.boundary_ratio = boundary_ratio(f);
    r.boundary_warning = r.boundary_ratio > 1e-10;
    return r;
}

std::vector<double> derivative(const std::vector<double>& f, int order, const Grid& g)
{
    Spectrum F = transform(g, f);
    for (int n = 0; n < g.N; ++n) F[n] *= std::pow(cplx(0.0, g.K[n]), order);
    if (order % 2 == 1) F[g.N / 2] = 0.0;
    return inverse_real(g, F);
}

double weighted_norm(const std::vector<double>& f, int r, double q, const Grid& g)
{
    if (!std::isfinite(std::cosh(q * g.L) * sup_norm(f)))
        throw std::overflow_error("weight cosh(qX) overflows; use a smaller q");
    std::vector<double> u(g.N);
    for (int j = 0; j < g.N; ++j) u[j] = std::cosh(q * g.X[j]) * f[j];
    double total = 0.0;
    for (int order = 0; order <= r; ++order) {
        const auto d = order == 0 ? u : derivative(u, order, g);
        double s = 0.0;
        for (double v : d) s += v * v;
        total += s * g.dx;
    }
    return std::sqrt(total);
}

double sup_norm(const std::vector<double>& f)
{
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double parity_defect(const std::vector<double>& f, Parity p, const Grid& g)
{
    if (p == Parity::none) return 0.0;
    const double s = p == Parity::even ? 1.0 : -1.0;
    double d = 0.0;
    for (int j = 1; j < g.N; ++j) d = std::max(d, std::abs(f[j] - s * f[g.reflect(j)]));
    return d;
}

std::vector<double> symmetrize(const std::vector<double>& f, Parity p, const Grid& g)
{
    if (p == Parity::none) return f;
    const double s = p == Parity::even ? 1.0 : -1.0;
    std::vector<double> out(g.N);
    for (int j = 0; j < g.N; ++j) out[j] = 0.5 * (f[j] + s * f[g.reflect(j)]);
    return out;
}

double boundary_ratio(const std::vector<double>& f)
{
    const double m = sup_norm(f);
    if (m == 0.0) return 0.0;
    const std::size_t n = f.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 20);
    double b = 0.0;
    for (std::size_t j = 0; j < edge; ++j) b = std::max(b, std::abs(f[j]));
    for (std::size_t j = n - edge; j < n; ++j) b = std::max(b, std::abs(f[j]));
    return b / m;
}

}  // namespace npt
