#include "dualcorr/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dualcorr {

std::size_t checked_product(std::span<const std::size_t> dims, std::size_t max_dim) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ValidationError("party dimension must be positive");
        if (total > max_dim / d)
            throw SizeLimitError("total dimension exceeds limit " + std::to_string(max_dim));
        total *= d;
    }
    return total;
}

MultipartiteState::MultipartiteState(ComplexMatrix matrix, std::vector<std::size_t> party_dims,
                                     const Tolerances& tol)
    : matrix_(std::move(matrix)), dims_(std::move(party_dims)) {
    if (dims_.empty()) throw ValidationError("state needs at least one party");
    std::size_t total = 1;
    for (std::size_t d : dims_) {
        if (d == 0) throw ValidationError("party dimension must be positive");
        total *= d;
    }
    if (total != matrix_.dim())
        throw ValidationError("party dimensions multiply to " + std::to_string(total) +
                              " but matrix has dimension " + std::to_string(matrix_.dim()));
    const cplx tr = matrix_.trace();
    if (std::abs(tr - 1.0) > tol.trace)
        throw ValidationError("state trace is " + std::to_string(tr.real()) + ", expected 1");
    if (matrix_.hermiticity_deviation() > tol.hermiticity)
        throw ValidationError("state matrix is not Hermitian");
}

void MultipartiteState::validate_spectrum(std::span<const double> eigenvalues, const Tolerances& tol) const {
    for (double l : eigenvalues)
        if (l < -tol.psd)
            throw ValidationError("state is not positive semidefinite (eigenvalue " + std::to_string(l) + ")");
}

void MultipartiteState::validate(const Tolerances& tol) const {
    validate_spectrum(eig_hermitian(matrix_).values, tol);
}

std::vector<std::size_t> slot_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> stride(dims.size());
    std::size_t s = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        stride[k] = s;
        s *= dims[k];
    }
    return stride;
}

std::vector<std::size_t> subregister_offsets(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> slots) {
    const auto stride = slot_strides(dims);
    std::vector<std::size_t> offsets{0};
    for (std::size_t slot : slots) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * dims[slot]);
        for (std::size_t base : offsets)
            for (std::size_t v = 0; v < dims[slot]; ++v) next.push_back(base + v * stride[slot]);
        offsets = std::move(next);
    }
    return offsets;
}

std::vector<std::size_t> complement_slots(std::size_t n, std::span<const std::size_t> slots) {
    std::vector<bool> taken(n, false);
    for (std::size_t s : slots) taken.at(s) = true;
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < n; ++k)
        if (!taken[k]) rest.push_back(k);
    return rest;
}

namespace {

void check_distinct_in_range(std::span<const std::size_t> parties, std::size_t n, const char* what) {
    std::vector<bool> seen(n, false);
    for (std::size_t p : parties) {
        if (p >= n)
            throw ValidationError(std::string(what) + ": party index " + std::to_string(p) +
                                  " out of range for " + std::to_string(n) + " parties");
        if (seen[p]) throw ValidationError(std::string(what) + ": duplicate party index " + std::to_string(p));
        seen[p] = true;
    }
}

// The result of tracing or relabeling a valid state is valid by construction;
// skip the trace/hermiticity checks that rounding could otherwise trip on
// very large registers.
MultipartiteState derived_state(ComplexMatrix m, std::vector<std::size_t> dims) {
    Tolerances loose;
    loose.trace = 1e-8;
    loose.hermiticity = 1e-8;
    return MultipartiteState(std::move(m), std::move(dims), loose);
}

}  // namespace

MultipartiteState reduced_state(const MultipartiteState& s, std::span<const std::size_t> keep) {
    const auto& dims = s.party_dims();
    check_distinct_in_range(keep, dims.size(), "reduced_state");
    if (keep.empty()) throw ValidationError("reduced_state: must keep at least one party");
    const auto traced = complement_slots(dims.size(), keep);
    const auto kept_off = subregister_offsets(dims, keep);
    const auto traced_off = subregister_offsets(dims, traced);

    const std::size_t dk = kept_off.size();
    const ComplexMatrix& m = s.matrix();
    ComplexMatrix out(dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            cplx acc = 0.0;
            for (std::size_t t : traced_off) acc += m(kept_off[i] + t, kept_off[j] + t);
            out(i, j) = acc;
        }
    std::vector<std::size_t> kept_dims;
    for (std::size_t k : keep) kept_dims.push_back(dims[k]);
    return derived_state(std::move(out), std::move(kept_dims));
}

MultipartiteState partial_trace(const MultipartiteState& s, std::span<const std::size_t> parties) {
    check_distinct_in_range(parties, s.parties(), "partial_trace");
    if (parties.empty()) return s;
    if (parties.size() == s.parties())
        throw ValidationError("partial_trace: cannot trace out every party");
    const auto keep = complement_slots(s.parties(), parties);
    return reduced_state(s, keep);
}

MultipartiteState partial_trace(const MultipartiteState& s, std::initializer_list<std::size_t> parties) {
    return partial_trace(s, std::span<const std::size_t>(parties.begin(), parties.size()));
}

void check_permutation(std::span<const std::size_t> perm, std::size_t n) {
    if (perm.size() != n)
        throw ValidationError("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                              std::to_string(n));
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) throw ValidationError("permutation is not a bijection");
        seen[p] = true;
    }
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
    check_permutation(perm, perm.size());
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t t = 0; t < perm.size(); ++t) inv[perm[t]] = t;
    return inv;
}

namespace {

// map[new_index] = old_index for the relabeling "new slot t = old slot perm[t]".
std::vector<std::size_t> permutation_index_map(std::span<const std::size_t> dims,
                                               std::span<const std::size_t> perm) {
    check_permutation(perm, dims.size());
    // Enumerating the old register in the order perm[0], perm[1], ... yields
    // old indices in exactly the order of the new register.
    return subregister_offsets(dims, perm);
}

}  // namespace

ComplexMatrix permute_operator(const ComplexMatrix& m, std::span<const std::size_t> dims,
                               std::span<const std::size_t> perm) {
    const auto map = permutation_index_map(dims, perm);
    if (map.size() != m.dim()) throw ValidationError("permute_operator: layout does not match matrix");
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* src = m.row(map[i]);
        cplx* dst = out.row(i);
        for (std::size_t j = 0; j < n; ++j) dst[j] = src[map[j]];
    }
    return out;
}

std::vector<cplx> permute_vector(std::span<const cplx> v, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
    const auto map = permutation_index_map(dims, perm);
    if (map.size() != v.size()) throw ValidationError("permute_vector: layout does not match vector");
    std::vector<cplx> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[map[i]];
    return out;
}

MultipartiteState permute_subsystems(const MultipartiteState& s, std::span<const std::size_t> perm) {
    const auto& dims = s.party_dims();
    auto m = permute_operator(s.matrix(), dims, perm);
    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t t = 0; t < perm.size(); ++t) new_dims[t] = dims[perm[t]];
    return derived_state(std::move(m), std::move(new_dims));
}

void apply_to_slots(std::vector<cplx>& v, std::span<const std::size_t> dims,
                    std::span<const std::size_t> slots, const ComplexMatrix& op) {
    const auto inner = subregister_offsets(dims, slots);
    if (inner.size() != op.dim()) throw ValidationError("apply_to_slots: operator dimension mismatch");
    const auto outer = subregister_offsets(dims, complement_slots(dims.size(), slots));
    if (inner.size() * outer.size() != v.size())
        throw ValidationError("apply_to_slots: vector does not match layout");
    const std::size_t m = inner.size();
    std::vector<cplx> gathered(m);
    for (std::size_t base : outer) {
        for (std::size_t a = 0; a < m; ++a) gathered[a] = v[base + inner[a]];
        for (std::size_t a = 0; a < m; ++a) {
            const cplx* row = op.row(a);
            cplx acc = 0.0;
            for (std::size_t b = 0; b < m; ++b) acc += row[b] * gathered[b];
            v[base + inner[a]] = acc;
        }
    }
}

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b, std::size_t max_dim) {
    auto m = kron(a.matrix(), b.matrix(), max_dim);
    std::vector<std::size_t> dims = a.party_dims();
    dims.insert(dims.end(), b.party_dims().begin(), b.party_dims().end());
    return derived_state(std::move(m), std::move(dims));
}

}  // namespace dualcorr
