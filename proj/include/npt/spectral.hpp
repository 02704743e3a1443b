#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "npt/params.hpp"

namespace npt {

enum class Parity { none, even, odd };
const char* parity_name(Parity p);

// Uniform periodic grid X_j = -L + j dx on [-L, L), wavenumbers in transform order.
struct Grid {
    double L = 40.0;
    int N = 4096;
    double dx = 0.0;
    std::vector<double> X;
    std::vector<double> K;

    Grid(double half_length, int n_points);

    // Index of -X_j. X_0 = -L is its own image under the periodic identification.
    int reflect(int j) const { return j == 0 ? 0 : N - j; }
    double dK() const;
    double k_max() const;  // pi/dx
    std::vector<double> sorted_wavenumbers() const;

    // Smallest power of two >= n with pi/dx >= 5 K.
    static int resolve_points(double half_length, int n, double K);
};

// Cached FFTW plans for one transform length. Execution is thread safe.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(const cplx* in, cplx* out) const;
    void inverse(const cplx* in, cplx* out) const;  // includes the 1/N factor
    int size() const { return n_; }

    static std::shared_ptr<const Fft> get(int n);

private:
    int n_;
    void* fwd_;
    void* bwd_;
};

using Spectrum = std::vector<cplx>;
using SymbolFn = std::function<cplx(double)>;
using Pair = std::array<std::vector<double>, 2>;

struct LocalizedField {
    std::vector<double> values;
    Parity parity = Parity::none;
    double decay_rate = 0.0;
};

struct PeriodicFieldCoeffs {
    double K = 0.0;
    int M = 0;
    std::vector<cplx> coeffs;  // index m + M
    Parity parity = Parity::none;

    PeriodicFieldCoeffs() = default;
    PeriodicFieldCoeffs(double fundamental, int modes);
    cplx& at(int m) { return coeffs[static_cast<std::size_t>(m + M)]; }
    cplx at(int m) const { return coeffs[static_cast<std::size_t>(m + M)]; }
    double eval(double X) const;
    // Worst violation of coeff(-m) = conj(coeff(m)).
    double reality_defect() const;
};

// One term of a localized x periodic product: exp(i omega X) times the field whose
// transform is `hat`.
struct Carrier {
    double omega = 0.0;
    Spectrum hat;
};
using CarrierSum = std::vector<Carrier>;

// Symbol samples on the grid wavenumbers shifted by `shift`. For shift = 0 the Nyquist
// entry takes the average of mu(+K_nyq) and mu(-K_nyq) so real fields stay real.
Spectrum sample_symbol(const SymbolFn& sym, const Grid& g, double shift = 0.0);
void check_finite(const Spectrum& sym, const Grid& g, double shift);

Spectrum transform(const Grid& g, const std::vector<double>& f);
Spectrum transform(const Grid& g, const std::vector<cplx>& f);
std::vector<cplx> inverse(const Grid& g, const Spectrum& F);
std::vector<double> inverse_real(const Grid& g, const Spectrum& F);
void multiply_inplace(const Spectrum& sym, Spectrum& F);

LocalizedField apply_multiplier_localized(const SymbolFn& sym, const LocalizedField& f,
                                          const Grid& g, Parity sym_parity = Parity::even);
std::vector<double> apply_sampled(const Spectrum& sym, const std::vector<double>& f,
                                  const Grid& g);
PeriodicFieldCoeffs apply_multiplier_periodic(const SymbolFn& sym, const PeriodicFieldCoeffs& f,
                                              Parity sym_parity = Parity::even);
std::vector<cplx> apply_multiplier_modulated(const SymbolFn& sym, const std::vector<double>& f,
                                             double omega, const Grid& g);

// Product f(X) * g(X) for periodic g with fundamental g.K, kept as one carrier per mode.
CarrierSum product_mixed(const std::vector<double>& f, const PeriodicFieldCoeffs& pg,
                         const Grid& g);
CarrierSum apply_multiplier_carriers(const SymbolFn& sym, const CarrierSum& c, const Grid& g);
std::vector<double> evaluate_carriers(const CarrierSum& c, const Grid& g);

struct IotaResult {
    double value = 0.0;
    double boundary_ratio = 0.0;
    bool boundary_warning = false;
};
IotaResult iota_quadrature(const std::vector<double>& f, double K, const Grid& g);
double trapezoid(const std::vector<double>& f, const Grid& g);

double weighted_norm(const std::vector<double>& f, int r, double q, const Grid& g);
std::vector<double> derivative(const std::vector<double>& f, int order, const Grid& g);

double sup_norm(const std::vector<double>& f);
double parity_defect(const std::vector<double>& f, Parity p, const Grid& g);
std::vector<double> symmetrize(const std::vector<double>& f, Parity p, const Grid& g);
// max |f| over the outer 5% of the grid relative to max |f|; 0 for the zero field.
double boundary_ratio(const std::vector<double>& f);

}  // namespace npt
