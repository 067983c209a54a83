#include "dualcorr/states.hpp"

#include <cmath>

#include "dualcorr/kernels.hpp"

namespace dualcorr {

MultipartiteState ghz(const GhzParams& params) {
    if (params.n < 2) throw ValidationError("ghz: need at least 2 parties");
    if (!(params.p >= 0.0 && params.p <= 1.0)) throw ValidationError("ghz: p must lie in [0, 1]");
    std::vector<std::size_t> dims(params.n, 2);
    const std::size_t d = checked_product(dims, default_tolerances().max_dim);
    const double p = params.p;
    ComplexMatrix m(d);
    m(0, 0) = p;
    m(d - 1, d - 1) = 1.0 - p;
    const double c = std::sqrt(p * (1.0 - p));
    m(0, d - 1) = c;
    m(d - 1, 0) = c;
    return MultipartiteState(std::move(m), std::move(dims));
}

MultipartiteState orthogonal_product(std::size_t n, std::size_t local_dim) {
    if (n < 1) throw ValidationError("orthogonal_product: need at least 1 party");
    if (local_dim < n)
        throw ValidationError("orthogonal_product: " + std::to_string(n) +
                              " mutually orthogonal vectors need local dimension >= " + std::to_string(n));
    std::vector<std::size_t> dims(n, local_dim);
    const std::size_t d = checked_product(dims, default_tolerances().max_dim);
    // Party k holds basis vector e_k; the joint basis index is the mixed-radix
    // number with digits (0, 1, ..., n-1).
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) idx = idx * local_dim + k;
    ComplexMatrix m(d);
    m(idx, idx) = 1.0;
    return MultipartiteState(std::move(m), std::move(dims));
}

std::string to_string(Ensemble e) { return e == Ensemble::pure_haar ? "pure-haar" : "hilbert-schmidt"; }

Ensemble ensemble_from_string(const std::string& s) {
    if (s == "pure-haar") return Ensemble::pure_haar;
    if (s == "hilbert-schmidt") return Ensemble::hilbert_schmidt;
    throw ValidationError("unknown ensemble '" + s + "' (expected pure-haar or hilbert-schmidt)");
}

MultipartiteState random_state(const RandomSpec& spec) {
    if (spec.party_dims.empty()) throw ValidationError("random_state: no parties");
    for (std::size_t d : spec.party_dims)
        if (d < 2) throw ValidationError("random_state: local dimensions must be >= 2");
    const std::size_t d = checked_product(spec.party_dims, default_tolerances().max_dim);
    Rng rng(spec.seed);

    if (spec.ensemble == Ensemble::pure_haar) {
        std::vector<cplx> g(d);
        for (auto& x : g) x = rng.complex_normal();
        const double norm = std::sqrt(kernels::norm2(g.data(), d));
        for (auto& x : g) x /= norm;
        auto m = ComplexMatrix::outer(g);
        // outer() of a unit vector has trace 1 up to rounding; pin it exactly
        const double tr = m.trace().real();
        m *= 1.0 / tr;
        return MultipartiteState(std::move(m), spec.party_dims);
    }

    ComplexMatrix g(d);
    for (auto& x : g.entries()) x = rng.complex_normal();
    ComplexMatrix m = g * g.adjoint();
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < d; ++j) m(j, i) = std::conj(m(i, j));
    }
    m *= 1.0 / m.trace().real();
    return MultipartiteState(std::move(m), spec.party_dims);
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    // cols[k] is column k; orthonormalized twice for numerical hygiene.
    std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) cols[k][i] = rng.complex_normal();
    for (std::size_t k = 0; k < dim; ++k) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < k; ++j) {
                const cplx proj = kernels::dotc(cols[j].data(), cols[k].data(), dim);
                kernels::axpy(cols[k].data(), cols[j].data(), dim, -proj);
            }
        const double norm = std::sqrt(kernels::norm2(cols[k].data(), dim));
        for (auto& x : cols[k]) x /= norm;
    }
    ComplexMatrix u(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) u(i, k) = cols[k][i];
    return u;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix h(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        h(i, i) = rng.normal();
        for (std::size_t j = i + 1; j < dim; ++j) {
            const cplx z = rng.complex_normal();
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

MultipartiteState random_pure_product(const std::vector<std::size_t>& party_dims, Rng& rng) {
    ComplexMatrix acc = ComplexMatrix::identity(1);
    for (std::size_t d : party_dims) {
        std::vector<cplx> v(d);
        for (auto& x : v) x = rng.complex_normal();
        const double norm = std::sqrt(kernels::norm2(v.data(), d));
        for (auto& x : v) x /= norm;
        acc = kron(acc, ComplexMatrix::outer(v));
    }
    acc *= 1.0 / acc.trace().real();
    return MultipartiteState(std::move(acc), party_dims);
}

}  // namespace dualcorr
