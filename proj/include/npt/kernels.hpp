#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops. Each has a scalar reference and an AVX2 variant with the same
// operation order, so both produce bit-identical results when built with -ffp-contract=off.
namespace npt::kernels {

using cplx = std::complex<double>;

// out[i] = a[i] * b[i] (complex)
using CmulFn = void (*)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
// y[i] = x[i] + h * k[i]
using AxpyFn = void (*)(const double* x, const double* k, double h, double* y, std::size_t n);
// acc[j] = -(1+w) F_j + wp[j] F_{j+1} + wm[j] F_{j-1}, F = r + r^2, periodic in j
using ForceFn = void (*)(const double* r, const double* wp, const double* wm, double w,
                         double* acc, double* scratch, std::size_t n);

namespace scalar {
void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void axpy(const double* x, const double* k, double h, double* y, std::size_t n);
void force(const double* r, const double* wp, const double* wm, double w, double* acc,
           double* scratch, std::size_t n);
}  // namespace scalar

namespace avx2 {
void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void axpy(const double* x, const double* k, double h, double* y, std::size_t n);
void force(const double* r, const double* wp, const double* wm, double w, double* acc,
           double* scratch, std::size_t n);
}  // namespace avx2

bool avx2_available();

struct Table {
    CmulFn cmul;
    AxpyFn axpy;
    ForceFn force;
    const char* name;
};

// Chosen once from CPUID; NPT_KERNELS=scalar forces the reference path.
const Table& active();

}  // namespace npt::kernels
