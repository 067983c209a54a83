#include "dualcorr/kernels.hpp"

namespace dualcorr::kernels {
namespace {

void rot2_ref(cplx* x, cplx* y, std::size_t n, cplx a, cplx b, cplx c, cplx d) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

cplx dotc_ref(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_ref(cplx* y, const cplx* x, std::size_t n, cplx a) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double norm2_ref(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    return s;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{Backend::scalar, "scalar", rot2_ref, dotc_ref, axpy_ref, norm2_ref};
    return t;
}

}  // namespace dualcorr::kernels
