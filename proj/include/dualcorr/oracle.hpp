#pragma once

// Exact support analysis of J_n for GHZ states.
//
// Everything here works on computational-basis bitstrings, with no floating
// point. A bitstring of width w is stored in a 64-bit word with slot 0 in the
// most significant of the w low bits, so "111000" reads slot 0 first.
//
// tau = |phi><phi|^{(x)(n-1)} is rank one and |phi>^{(x)(n-1)} expands into
// 2^{n-1} basis strings: each copy is either all zeros or all ones. sigma is
// diagonal in the computational basis and its support is spanned by the
// strings whose n blocks of n-1 slots (one block per factor) are each
// constant. Support containment therefore reduces to: after relabeling by the
// matching, every tau string must be a sigma support string.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dualcorr/matching.hpp"
#include "dualcorr/support.hpp"

namespace dualcorr::oracle {

/// Which GHZ branches carry nonzero amplitude.
///   both:       0 < p < 1
///   zeros_only: p = 1, the state is |0...0>
///   ones_only:  p = 0, the state is |1...1>
enum class Branches { both, zeros_only, ones_only };

Branches branches_for(double p);

constexpr std::size_t max_width = 64;

/// sqrt(p)^zeros * sqrt(1-p)^ones, kept symbolic.
struct Amplitude {
    unsigned zeros = 0;
    unsigned ones = 0;
    friend bool operator==(const Amplitude&, const Amplitude&) = default;
};

struct SparseBasisVector {
    std::size_t width = 0;
    std::map<std::uint64_t, Amplitude> terms;

    std::multiset<std::size_t> weights() const;
};

/// Slot-indexed bitstring helpers.
std::uint64_t bit_of_slot(std::size_t width, std::size_t slot);
std::string to_bitstring(std::uint64_t bits, std::size_t width);
std::uint64_t from_bitstring(const std::string& s);

/// Bitstrings whose consecutive blocks are each all-0 or all-1.
struct BlockSupportSet {
    std::size_t width = 0;
    std::vector<std::size_t> block_lengths;
    Branches branches = Branches::both;

    bool contains(std::uint64_t bits) const;
    /// Enumerates every member (2^blocks of them for Branches::both).
    std::vector<std::uint64_t> members() const;
};

/// |phi>^{(x)(n-1)} in tau slot order. Throws SizeLimitError when n(n-1) > 64.
SparseBasisVector ghz_tau_vector(std::size_t n, Branches b = Branches::both);

/// Support of (x)_k tr_k |phi><phi| in sigma slot order.
BlockSupportSet ghz_sigma_support(std::size_t n, Branches b = Branches::both);

/// Hamming weights carried by the tau terms: {c n : 0 <= c <= n-1}.
std::set<std::size_t> tau_weights(std::size_t n);
/// Hamming weights of sigma support strings: {c (n-1) : 0 <= c <= n}.
std::set<std::size_t> sigma_weights(std::size_t n);
/// Intersection of the two.
std::set<std::size_t> shared_weights(std::size_t n);
/// Multiples of lcm(n, n-1) = n(n-1)/gcd(n, n-1) in [0, n(n-1)].
std::set<std::size_t> shared_weights_by_gcd(std::size_t n);

struct Verdict {
    bool contained = false;
    std::optional<std::uint64_t> witness;  ///< tau term (tau slot order) outside the support
    std::string method;                    ///< "membership" | "weight-arithmetic" | "degenerate" | ...
};

/// Direct membership test of every tau term under one matching.
Verdict containment_verdict(std::size_t n, const PartyMatching& m, Branches b = Branches::both);

/// Whether some matching achieves containment. Decided by Hamming weights:
/// matchings permute slots and so preserve weight; a tau term whose weight is
/// not a sigma support weight is outside the support under every matching.
/// When no such term exists (n = 2, or a degenerate branch) the canonical and
/// party-aligned matchings are checked by membership.
Verdict containment_verdict_all(std::size_t n, Branches b = Branches::both);

struct Disagreement {
    PartyMatching matching;
    bool dense_contained = false;
    double dense_residual = 0.0;
    bool exact_contained = false;
    std::optional<std::uint64_t> witness;
};

struct AgreementReport {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t total = 0;
    std::size_t agreed = 0;
    std::size_t dense_contained = 0;
    std::size_t exact_contained = 0;
    JRoute route = JRoute::dense;
    std::vector<Disagreement> disagreements;

    bool all_agree() const { return agreed == total; }
    std::string dump() const;
};

/// Thrown by cross_check_dense; carries the full report.
class AgreementFailure : public std::runtime_error {
public:
    explicit AgreementFailure(AgreementReport r);
    const AgreementReport& report() const { return report_; }

private:
    AgreementReport report_;
};

/// Compare numeric verdicts (support-analysis) with exact verdicts for the
/// given matchings on ghz(n, p). Throws AgreementFailure on any mismatch.
AgreementReport cross_check_dense(std::size_t n, double p, const std::vector<PartyMatching>& matchings,
                                  const Tolerances& tol = default_tolerances());

/// Compare the verdicts already held by a scan report with the exact oracle.
/// Returns the report without throwing.
AgreementReport compare_with_scan(std::size_t n, double p, const MatchingScanReport& scan);

}  // namespace dualcorr::oracle
