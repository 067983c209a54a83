#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dualcorr/matrix.hpp"

namespace dualcorr {

/// Density matrix together with its tensor-factor layout.
///
/// Parties are indexed from 0. Party 0 is the most-significant tensor factor,
/// so basis index i decomposes as a mixed-radix number with party 0 first.
///
/// Construction checks the structural invariants (dimension product, unit
/// trace, hermiticity). Positive semidefiniteness needs a spectrum and is
/// checked by `validate_spectrum`, which every entropy routine calls on the
/// spectrum it computes anyway.
class MultipartiteState {
public:
    MultipartiteState(ComplexMatrix matrix, std::vector<std::size_t> party_dims,
                      const Tolerances& tol = default_tolerances());

    const ComplexMatrix& matrix() const { return matrix_; }
    const std::vector<std::size_t>& party_dims() const { return dims_; }
    std::size_t parties() const { return dims_.size(); }
    std::size_t dim() const { return matrix_.dim(); }

    /// Throws ValidationError if any eigenvalue is below -tol.psd.
    void validate_spectrum(std::span<const double> eigenvalues,
                           const Tolerances& tol = default_tolerances()) const;

    /// Full check including an eigendecomposition.
    void validate(const Tolerances& tol = default_tolerances()) const;

private:
    ComplexMatrix matrix_;
    std::vector<std::size_t> dims_;
};

/// Product of `dims`, throwing SizeLimitError above `max_dim`.
std::size_t checked_product(std::span<const std::size_t> dims, std::size_t max_dim);

/// Stride of each slot in the big-endian mixed-radix layout.
std::vector<std::size_t> slot_strides(std::span<const std::size_t> dims);

/// Offsets of every basis index of the sub-register `slots` (in the order
/// given) inside the full register. Full index = offsets(slots)[a] + offsets(rest)[b].
std::vector<std::size_t> subregister_offsets(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> slots);

/// Slots of `dims` not listed in `slots`, ascending.
std::vector<std::size_t> complement_slots(std::size_t n, std::span<const std::size_t> slots);

/// Trace out `parties` (any order, no duplicates). The remaining parties keep
/// their relative order. An empty set returns the input unchanged.
MultipartiteState partial_trace(const MultipartiteState& s, std::span<const std::size_t> parties);
MultipartiteState partial_trace(const MultipartiteState& s, std::initializer_list<std::size_t> parties);

/// Reduced state on `keep`, arranged in the order listed (which need not be
/// ascending).
MultipartiteState reduced_state(const MultipartiteState& s, std::span<const std::size_t> keep);

/// Relabel slots: slot t of the result is slot perm[t] of the input.
MultipartiteState permute_subsystems(const MultipartiteState& s, std::span<const std::size_t> perm);

/// Same relabeling on a bare operator with the given layout.
ComplexMatrix permute_operator(const ComplexMatrix& m, std::span<const std::size_t> dims,
                               std::span<const std::size_t> perm);

/// Same relabeling on a state vector.
std::vector<cplx> permute_vector(std::span<const cplx> v, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);

/// Apply `op` to the sub-register `slots` (in the listed order) of a vector
/// laid out by `dims`, identity elsewhere.
void apply_to_slots(std::vector<cplx>& v, std::span<const std::size_t> dims,
                    std::span<const std::size_t> slots, const ComplexMatrix& op);

/// Throws ValidationError unless `perm` is a bijection on {0..n-1}.
void check_permutation(std::span<const std::size_t> perm, std::size_t n);

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Kronecker product of states, layouts concatenated.
MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b,
                         std::size_t max_dim = default_tolerances().max_dim);

}  // namespace dualcorr
