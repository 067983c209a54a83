#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualcorr/state.hpp"

namespace dualcorr {

/// Rectangular operator (rows x cols), row-major. Kraus operators map a
/// cols-dimensional input to a rows-dimensional output.
struct KrausOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    KrausOperator() = default;
    KrausOperator(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    KrausOperator(std::initializer_list<std::initializer_list<cplx>> entries);

    cplx& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct KrausChannel {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<KrausOperator> kraus_ops;

    /// max |(sum_i K_i^dagger K_i - I)_ab|
    double completeness_residual() const;
};

/// Checks shapes and completeness within tol; throws ValidationError.
void validate_channel(const KrausChannel& ch, double tol = 1e-9);

/// rho -> sum_i (I (x) K_i (x) I) rho (I (x) K_i (x) I)^dagger on `party`.
/// The party's local dimension becomes ch.output_dim.
MultipartiteState apply_local(const MultipartiteState& s, const KrausChannel& ch, std::size_t party);

/// Single-qubit channels.
/// depolarizing(l):       rho -> (1-l) rho + l I/2        (Kraus: I, X, Y, Z)
/// dephasing(g):          off-diagonals scaled by (1-g)   (Kraus: I, Z)
/// amplitude_damping(g):  |1> decays to |0> with probability g
KrausChannel depolarizing(double lambda);
KrausChannel dephasing(double gamma);
KrausChannel amplitude_damping(double gamma);
KrausChannel identity_channel(std::size_t dim);

/// Parses "depolarizing:<l>", "dephasing:<g>", "amplitude-damping:<g>".
KrausChannel standard_channel(const std::string& spec);

/// Stinespring construction: a Haar-random isometry V of shape
/// (dim*kraus_count) x dim, cut into kraus_count blocks of dim rows.
KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed);

}  // namespace dualcorr
