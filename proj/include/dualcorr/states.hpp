#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualcorr/rng.hpp"
#include "dualcorr/state.hpp"

namespace dualcorr {

/// sqrt(p)|0...0> + sqrt(1-p)|1...1> on n qubits.
struct GhzParams {
    std::size_t n = 3;
    double p = 0.5;
};

MultipartiteState ghz(const GhzParams& params);

/// |0><0| (x) |1><1| (x) ... (x) |n-1><n-1| on n parties of dimension local_dim.
/// Requires local_dim >= n so the local vectors are mutually orthogonal.
MultipartiteState orthogonal_product(std::size_t n, std::size_t local_dim);

enum class Ensemble { pure_haar, hilbert_schmidt };

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& s);

struct RandomSpec {
    std::vector<std::size_t> party_dims;
    std::uint64_t seed = 0;
    Ensemble ensemble = Ensemble::hilbert_schmidt;
};

/// pure_haar: |g><g| / <g|g> for a complex Gaussian vector g.
/// hilbert_schmidt: G G^dagger / tr(G G^dagger) for a square complex Gaussian G.
/// Entries are drawn row-major from one Rng seeded with spec.seed.
MultipartiteState random_state(const RandomSpec& spec);

/// Haar-random unitary via Gram-Schmidt on complex Gaussian columns.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

/// GUE sample: real N(0,1) diagonal, standard complex Gaussian above it.
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);

/// Product of independent Haar-random pure states, one per party.
MultipartiteState random_pure_product(const std::vector<std::size_t>& party_dims, Rng& rng);

}  // namespace dualcorr
