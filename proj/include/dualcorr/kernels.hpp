#pragma once

// Inner-loop kernels on contiguous complex<double> arrays.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into a separate translation unit and chosen at runtime
// when the CPU reports both features. Setting DUALCORR_KERNELS=scalar in the
// environment (or calling set_backend) pins the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace dualcorr::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

/// Function table for one backend.
struct KernelTable {
    Backend backend;
    const char* name;

    /// x <- a*x + b*y,  y <- c*x + d*y  (old x, y on the right-hand side).
    void (*rot2)(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d);

    /// sum_i conj(x_i) * y_i
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);

    /// y <- y + a*x
    void (*axpy)(cplx* y, const cplx* x, std::size_t n, cplx a);

    /// sum_i |x_i|^2
    double (*norm2)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports_avx2();

/// Currently selected table. First use resolves the best available backend.
const KernelTable& active();

/// Force a backend. Returns false (and leaves the selection unchanged) when
/// the requested backend is unavailable on this build or CPU.
bool set_backend(Backend b);

std::string_view backend_name();

inline void rot2(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    active().rot2(x, y, n, a, b, c, d);
}
inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return active().dotc(x, y, n); }
inline void axpy(cplx* y, const cplx* x, std::size_t n, cplx a) { active().axpy(y, x, n, a); }
inline double norm2(const cplx* x, std::size_t n) { return active().norm2(x, n); }

}  // namespace dualcorr::kernels
