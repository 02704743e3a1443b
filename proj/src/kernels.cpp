#include "npt/kernels.hpp"

#include <immintrin.h>

#include <cstdlib>
#include <cstring>

namespace npt::kernels {

namespace scalar {

void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n)
{
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        po[2 * i] = ar * br - ai * bi;
        po[2 * i + 1] = ar * bi + ai * br;
    }
}

void axpy(const double* x, const double* k, double h, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * k[i];
}

void force(const double* r, const double* wp, const double* wm, double w, double* acc,
           double* F, std::size_t n)
{
    const double c0 = -(1.0 + w);
    for (std::size_t j = 0; j < n; ++j) F[j] = r[j] + r[j] * r[j];
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        double t = c0 * F[j];
        t = t + wp[j] * F[jp];
        t = t + wm[j] * F[jm];
        acc[j] = t;
    }
}

}  // namespace scalar

namespace avx2 {

__attribute__((target("avx2"))) void cmul(const cplx* a, const cplx* b, cplx* out,
                                          std::size_t n)
{
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d are = _mm256_movedup_pd(va);
        const __m256d aim = _mm256_permute_pd(va, 0xF);
        const __m256d bsw = _mm256_permute_pd(vb, 0x5);
        const __m256d t1 = _mm256_mul_pd(are, vb);
        const __m256d t2 = _mm256_mul_pd(aim, bsw);
        _mm256_storeu_pd(po + 2 * i, _mm256_addsub_pd(t1, t2));
    }
    if (i < n) scalar::cmul(a + i, b + i, out + i, n - i);
}

__attribute__((target("avx2"))) void axpy(const double* x, const double* k, double h,
                                          double* y, std::size_t n)
{
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_mul_pd(vh, _mm256_loadu_pd(k + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), t));
    }
    for (; i < n; ++i) y[i] = x[i] + h * k[i];
}

__attribute__((target("avx2"))) void force(const double* r, const double* wp,
                                           const double* wm, double w, double* acc,
                                           double* F, std::size_t n)
{
    const double c0 = -(1.0 + w);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d v = _mm256_loadu_pd(r + j);
        _mm256_storeu_pd(F + j, _mm256_add_pd(v, _mm256_mul_pd(v, v)));
    }
    for (; j < n; ++j) F[j] = r[j] + r[j] * r[j];

    auto edge = [&](std::size_t i) {
        const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
        const std::size_t im = (i == 0) ? n - 1 : i - 1;
        double t = c0 * F[i];
        t = t + wp[i] * F[ip];
        t = t + wm[i] * F[im];
        acc[i] = t;
    };
    if (n < 3) {
        for (std::size_t i = 0; i < n; ++i) edge(i);
        return;
    }
    edge(0);
    const __m256d vc0 = _mm256_set1_pd(c0);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d t = _mm256_mul_pd(vc0, _mm256_loadu_pd(F + i));
        t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(wp + i), _mm256_loadu_pd(F + i + 1)));
        t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(wm + i), _mm256_loadu_pd(F + i - 1)));
        _mm256_storeu_pd(acc + i, t);
    }
    for (; i < n; ++i) edge(i);
}

}  // namespace avx2

bool avx2_available()
{
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}

const Table& active()
{
    static const Table table = [] {
        const char* env = std::getenv("NPT_KERNELS");
        const bool force_scalar = env && std::strcmp(env, "scalar") == 0;
        if (!force_scalar && avx2_available())
            return Table{avx2::cmul, avx2::axpy, avx2::force, "avx2"};
        return Table{scalar::cmul, scalar::axpy, scalar::force, "scalar"};
    }();
    return table;
}

}  // namespace npt::kernels
