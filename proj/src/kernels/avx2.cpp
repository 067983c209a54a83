// Compiled with -mavx2 -mfma. Nothing in here may run unless
// cpu_supports_avx2() returned true.

#include <immintrin.h>

#include "dualcorr/kernels.hpp"

namespace dualcorr::kernels {
namespace {

// One __m256d holds two complex<double> as [re0, im0, re1, im1].

inline __m256d cmul_bcast(__m256d re, __m256d im, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(re, v, _mm256_mul_pd(im, swapped));
}

void rot2_avx2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    auto* xp = reinterpret_cast<double*>(x);
    auto* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
    const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
    const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        const __m256d nx = _mm256_add_pd(cmul_bcast(ar, ai, xv), cmul_bcast(br, bi, yv));
        const __m256d ny = _mm256_add_pd(cmul_bcast(cr, ci, xv), cmul_bcast(dr, di, yv));
        _mm256_storeu_pd(xp + 2 * i, nx);
        _mm256_storeu_pd(yp + 2 * i, ny);
    }
    for (; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const auto* xp = reinterpret_cast<const double*>(x);
    const auto* yp = reinterpret_cast<const double*>(y);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_im);
    }
    alignas(32) double r[4];
    alignas(32) double m[4];
    _mm256_store_pd(r, acc_re);
    _mm256_store_pd(m, acc_im);
    double re = (r[0] + r[1]) + (r[2] + r[3]);
    double im = (m[0] - m[1]) + (m[2] - m[3]);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_avx2(cplx* y, const cplx* x, std::size_t n, cplx a) {
    const auto* xp = reinterpret_cast<const double*>(x);
    auto* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double norm2_avx2(const cplx* x, std::size_t n) {
    const auto* xp = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    alignas(32) double r[4];
    _mm256_store_pd(r, acc);
    double s = (r[0] + r[1]) + (r[2] + r[3]);
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable t{Backend::avx2, "avx2", rot2_avx2, dotc_avx2, axpy_avx2, norm2_avx2};
    return &t;
}

}  // namespace dualcorr::kernels
