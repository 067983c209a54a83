#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dualcorr/kernels.hpp"
#include "dualcorr/matrix.hpp"

namespace dualcorr {
namespace {

double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

}  // namespace

// Cyclic Jacobi for complex Hermitian matrices.
//
// Each (p,q) step uses G = D R, where D = diag(1, e^{-i phi}) strips the
// phase of a_pq and R is the real Jacobi rotation of the resulting symmetric
// 2x2 block. Rows p,q of G^dagger A are updated with the rot2 kernel; the
// columns follow from hermiticity, so the matrix is only ever touched by
// contiguous row operations plus one strided copy. Eigenvectors are kept
// transposed (row k = eigenvector k) for the same reason.
SpectralDecomposition eig_hermitian(const ComplexMatrix& input, const EigOptions& opts) {
    const std::size_t n = input.dim();
    double scale = 0.0;
    for (const auto& x : input.entries()) scale = std::max(scale, std::abs(x));
    const double dev = input.hermiticity_deviation();
    if (dev > opts.hermiticity_tol * std::max(1.0, scale))
        throw ValidationError("eig_hermitian: input is not Hermitian (deviation " + std::to_string(dev) +
                              ")");

    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    ComplexMatrix vt = ComplexMatrix::identity(n);

    double frob2 = 0.0;
    for (const auto& x : a.entries()) frob2 += std::norm(x);
    const double stop2 = 1e-30 * std::max(frob2, 1e-300);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= stop2) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // NR-style: once the element is below rounding of both
                // diagonal entries it can be dropped outright.
                if (sweep > 3 && std::abs(app) + 1e3 * mag == std::abs(app) &&
                    std::abs(aqq) + 1e3 * mag == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / mag;  // e^{i phi}
                const double theta = (aqq - app) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                kernels::rot2(a.row(p), a.row(q), n, c, -s * phase, s, c * phase);
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a(i, p) = std::conj(a(p, i));
                    a(i, q) = std::conj(a(q, i));
                }

                const cplx phase_c = std::conj(phase);
                kernels::rot2(vt.row(p), vt.row(q), n, c, -s * phase_c, s, c * phase_c);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

    SpectralDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        const cplx* v = vt.row(order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v[r];
    }
    return out;
}

}  // namespace dualcorr
