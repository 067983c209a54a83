#include "dualcorr/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "dualcorr/states.hpp"

namespace dualcorr::oracle {

Branches branches_for(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
    if (p == 0.0) return Branches::ones_only;
    if (p == 1.0) return Branches::zeros_only;
    return Branches::both;
}

std::multiset<std::size_t> SparseBasisVector::weights() const {
    std::multiset<std::size_t> w;
    for (const auto& [bits, amp] : terms) w.insert(static_cast<std::size_t>(std::popcount(bits)));
    return w;
}

std::uint64_t bit_of_slot(std::size_t width, std::size_t slot) { return std::uint64_t{1} << (width - 1 - slot); }

std::string to_bitstring(std::uint64_t bits, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t t = 0; t < width; ++t)
        if (bits & bit_of_slot(width, t)) s[t] = '1';
    return s;
}

std::uint64_t from_bitstring(const std::string& s) {
    if (s.size() > max_width) throw SizeLimitError("bitstring longer than 64 slots");
    std::uint64_t bits = 0;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw ValidationError("bitstring may only contain 0 and 1");
        bits = (bits << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return bits;
}

namespace {

std::size_t checked_width(std::size_t n) {
    if (n < 2) throw ValidationError("GHZ oracle needs n >= 2");
    const std::size_t width = n * (n - 1);
    if (width > max_width)
        throw SizeLimitError("n(n-1) = " + std::to_string(width) + " slots exceeds the 64-bit oracle width");
    return width;
}

std::uint64_t block_mask(std::size_t width, std::size_t start, std::size_t len) {
    std::uint64_t m = 0;
    for (std::size_t t = start; t < start + len; ++t) m |= bit_of_slot(width, t);
    return m;
}

// y[perm[t]] = b[t]: moves a tau-ordered string into sigma slot order.
std::uint64_t relabel(std::uint64_t tau_bits, const PartyMatching& m, std::size_t width) {
    std::uint64_t y = 0;
    for (std::size_t t = 0; t < width; ++t)
        if (tau_bits & bit_of_slot(width, t)) y |= bit_of_slot(width, m.perm[t]);
    return y;
}

}  // namespace

bool BlockSupportSet::contains(std::uint64_t bits) const {
    if (width < max_width && (bits >> width) != 0) return false;
    std::size_t start = 0;
    for (std::size_t len : block_lengths) {
        const std::uint64_t mask = block_mask(width, start, len);
        const std::uint64_t v = bits & mask;
        const bool zeros = v == 0;
        const bool ones = v == mask;
        switch (branches) {
            case Branches::both:
                if (!zeros && !ones) return false;
                break;
            case Branches::zeros_only:
                if (!zeros) return false;
                break;
            case Branches::ones_only:
                if (!ones) return false;
                break;
        }
        start += len;
    }
    return true;
}

std::vector<std::uint64_t> BlockSupportSet::members() const {
    const std::size_t blocks = block_lengths.size();
    if (branches == Branches::zeros_only) return {0};
    if (branches == Branches::ones_only) return {block_mask(width, 0, width)};
    std::vector<std::uint64_t> out;
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << blocks); ++choice) {
        std::uint64_t bits = 0;
        std::size_t start = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            if (choice & (std::uint64_t{1} << (blocks - 1 - b))) bits |= block_mask(width, start, block_lengths[b]);
            start += block_lengths[b];
        }
        out.push_back(bits);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SparseBasisVector ghz_tau_vector(std::size_t n, Branches b) {
    const std::size_t width = checked_width(n);
    const std::size_t copies = n - 1;
    SparseBasisVector v;
    v.width = width;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << copies); ++subset) {
        const auto ones = static_cast<unsigned>(std::popcount(subset));
        if (b == Branches::zeros_only && ones != 0) continue;
        if (b == Branches::ones_only && ones != copies) continue;
        std::uint64_t bits = 0;
        for (std::size_t c = 0; c < copies; ++c)
            if (subset & (std::uint64_t{1} << c)) bits |= block_mask(width, c * n, n);
        v.terms[bits] = Amplitude{static_cast<unsigned>(copies) - ones, ones};
    }
    return v;
}

BlockSupportSet ghz_sigma_support(std::size_t n, Branches b) {
    const std::size_t width = checked_width(n);
    return BlockSupportSet{width, std::vector<std::size_t>(n, n - 1), b};
}

std::set<std::size_t> tau_weights(std::size_t n) {
    std::set<std::size_t> w;
    for (std::size_t c = 0; c + 1 <= n; ++c) w.insert(c * n);
    return w;
}

std::set<std::size_t> sigma_weights(std::size_t n) {
    std::set<std::size_t> w;
    for (std::size_t c = 0; c <= n; ++c) w.insert(c * (n - 1));
    return w;
}

std::set<std::size_t> shared_weights(std::size_t n) {
    const auto a = tau_weights(n);
    const auto b = sigma_weights(n);
    std::set<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

std::set<std::size_t> shared_weights_by_gcd(std::size_t n) {
    const std::size_t l = std::lcm(n, n - 1);
    std::set<std::size_t> out;
    for (std::size_t w = 0; w <= n * (n - 1); w += l) out.insert(w);
    return out;
}

Verdict containment_verdict(std::size_t n, const PartyMatching& m, Branches b) {
    const std::size_t width = checked_width(n);
    check_permutation(m.perm, width);
    const auto tau = ghz_tau_vector(n, b);
    const auto support = ghz_sigma_support(n, b);
    for (const auto& [bits, amp] : tau.terms)
        if (!support.contains(relabel(bits, m, width))) return {false, bits, "membership"};
    return {true, std::nullopt, "membership"};
}

Verdict containment_verdict_all(std::size_t n, Branches b) {
    const std::size_t width = checked_width(n);
    if (b != Branches::both) {
        // A single all-equal string; every relabeling leaves it unchanged and
        // it is the one support string of sigma.
        return {true, std::nullopt, "degenerate"};
    }
    const auto sw = sigma_weights(n);
    for (std::size_t w : tau_weights(n)) {
        if (sw.count(w)) continue;
        // The tau term with copies 0..w/n-1 set has weight w.
        std::uint64_t bits = 0;
        for (std::size_t c = 0; c < w / n; ++c) bits |= block_mask(width, c * n, n);
        return {false, bits, "weight-arithmetic"};
    }
    for (const auto& m : {PartyMatching::canonical(n), PartyMatching::party_aligned(n)})
        if (containment_verdict(n, m, b).contained) return {true, std::nullopt, "membership:" + m.kind_name()};
    // Weights do not decide and the natural candidates fail; search the rest.
    if (factorial(width) > 1e6) throw BudgetExceededError("containment_verdict_all: undecided and too many matchings");
    std::vector<std::size_t> perm(width);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (containment_verdict(n, PartyMatching::explicit_list(n, perm), b).contained)
            return {true, std::nullopt, "membership:exhaustive"};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {false, std::nullopt, "membership:exhaustive"};
}

std::string AgreementReport::dump() const {
    std::ostringstream os;
    os << "cross-check n=" << n << " p=" << p << " route=" << to_string(route) << ": " << agreed << "/" << total
       << " agree (dense contained " << dense_contained << ", exact contained " << exact_contained << ")\n";
    const std::size_t width = n * (n - 1);
    for (const auto& d : disagreements) {
        os << "  " << d.matching.describe() << ": dense=" << (d.dense_contained ? "contained" : "not-contained")
           << " residual=" << d.dense_residual << " exact=" << (d.exact_contained ? "contained" : "not-contained");
        if (d.witness) os << " witness=" << to_bitstring(*d.witness, width);
        os << "\n";
    }
    return os.str();
}

AgreementFailure::AgreementFailure(AgreementReport r)
    : std::runtime_error("dense and exact support verdicts disagree\n" + r.dump()), report_(std::move(r)) {}

namespace {

AgreementReport compare(std::size_t n, double p, const std::vector<MatchingVerdict>& verdicts, JRoute route) {
    const Branches b = branches_for(p);
    AgreementReport r;
    r.n = n;
    r.p = p;
    r.route = route;
    for (const auto& v : verdicts) {
        const Verdict exact = containment_verdict(n, v.matching, b);
        ++r.total;
        if (v.contained) ++r.dense_contained;
        if (exact.contained) ++r.exact_contained;
        if (exact.contained == v.contained)
            ++r.agreed;
        else
            r.disagreements.push_back({v.matching, v.contained, v.residual, exact.contained, exact.witness});
    }
    return r;
}

}  // namespace

AgreementReport cross_check_dense(std::size_t n, double p, const std::vector<PartyMatching>& matchings,
                                  const Tolerances& tol) {
    const auto rho = ghz({n, p});
    const JSpace space(rho, tol);
    const auto verdicts = evaluate_matchings(rho, matchings, tol);
    auto report = compare(n, p, verdicts, space.resolve(JRoute::automatic));
    if (!report.all_agree()) throw AgreementFailure(std::move(report));
    return report;
}

AgreementReport compare_with_scan(std::size_t n, double p, const MatchingScanReport& scan) {
    return compare(n, p, scan.verdicts, scan.route);
}

}  // namespace dualcorr::oracle
