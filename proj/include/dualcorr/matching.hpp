#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualcorr/rng.hpp"

namespace dualcorr {

/// Slot bookkeeping for the two operands of J_n on n parties.
///
/// tau = rho^{(x)(n-1)}: slot t = c*n + j holds party j of copy c (copy-major).
/// sigma = (x)_k tr_k rho: slot s = k*(n-1) + i holds the i-th surviving party
/// of factor k, i.e. party i if i < k and party i+1 otherwise (factor-major).
struct SlotLayout {
    std::size_t n;

    std::size_t slots() const { return n * (n - 1); }
    std::size_t tau_slot(std::size_t copy, std::size_t party) const { return copy * n + party; }
    std::size_t sigma_slot(std::size_t factor, std::size_t party) const;
    std::size_t tau_party(std::size_t slot) const { return slot % n; }
    std::size_t tau_copy(std::size_t slot) const { return slot / n; }
    std::size_t sigma_factor(std::size_t slot) const { return slot / (n - 1); }
    std::size_t sigma_party(std::size_t slot) const;

    /// "c<copy>.p<party>" for every tau slot.
    std::vector<std::string> tau_labels() const;
    /// "f<factor>.p<party>" for every sigma slot.
    std::vector<std::string> sigma_labels() const;
};

/// Bijection between tau slots and sigma slots: tau slot t is paired with
/// sigma slot perm[t]. Applying it to sigma is permute_subsystems(sigma, perm).
struct PartyMatching {
    enum class Kind { canonical, swap, party_aligned, factor_order, explicit_list };

    std::vector<std::size_t> perm;
    Kind kind = Kind::explicit_list;

    /// Identity pairing of the two flattened orders.
    static PartyMatching canonical(std::size_t n);
    /// n = 2 only: pairs party 1 with rho_1 and party 2 with rho_2.
    static PartyMatching swap();
    /// Every tau slot of party j goes to a sigma slot of party j; copy c of
    /// party j takes the c-th factor (ascending) that still contains j.
    static PartyMatching party_aligned(std::size_t n);
    /// Reorders whole factors: position m of the result is factor factor_perm[m].
    static PartyMatching factor_order(std::size_t n, const std::vector<std::size_t>& factor_perm);
    /// Validated explicit slot list.
    static PartyMatching explicit_list(std::size_t n, std::vector<std::size_t> perm);

    std::size_t parties() const;
    std::vector<std::size_t> inverse() const;
    std::string kind_name() const;
    std::string describe() const;

    /// True when every tau slot is paired with a sigma slot of the same party.
    bool is_party_consistent() const;

    friend bool operator==(const PartyMatching& a, const PartyMatching& b) { return a.perm == b.perm; }
};

/// Parse "canonical", "swap", "party-aligned" or a comma-separated slot list.
PartyMatching parse_matching(const std::string& spec, std::size_t n);

/// k! as a double, saturating at infinity; used for budget checks.
double factorial(std::size_t k);

/// Uniformly random permutation of {0..size-1} (Fisher-Yates, drawn from the back).
std::vector<std::size_t> random_permutation(std::size_t size, Rng& rng);

}  // namespace dualcorr
