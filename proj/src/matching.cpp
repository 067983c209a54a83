#include "dualcorr/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "dualcorr/errors.hpp"
#include "dualcorr/state.hpp"

namespace dualcorr {

std::size_t SlotLayout::sigma_slot(std::size_t factor, std::size_t party) const {
    if (party == factor) throw ValidationError("factor " + std::to_string(factor) + " does not contain its own party");
    return factor * (n - 1) + (party < factor ? party : party - 1);
}

std::size_t SlotLayout::sigma_party(std::size_t slot) const {
    const std::size_t k = slot / (n - 1);
    const std::size_t i = slot % (n - 1);
    return i < k ? i : i + 1;
}

std::vector<std::string> SlotLayout::tau_labels() const {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < slots(); ++t)
        out.push_back("c" + std::to_string(tau_copy(t)) + ".p" + std::to_string(tau_party(t)));
    return out;
}

std::vector<std::string> SlotLayout::sigma_labels() const {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < slots(); ++s)
        out.push_back("f" + std::to_string(sigma_factor(s)) + ".p" + std::to_string(sigma_party(s)));
    return out;
}

namespace {

std::size_t parties_for_slots(std::size_t slots) {
    for (std::size_t n = 2; n * (n - 1) <= slots; ++n)
        if (n * (n - 1) == slots) return n;
    throw ValidationError("matching length " + std::to_string(slots) + " is not n(n-1) for any n >= 2");
}

}  // namespace

PartyMatching PartyMatching::canonical(std::size_t n) {
    if (n < 2) throw ValidationError("matching needs n >= 2");
    PartyMatching m;
    m.perm.resize(n * (n - 1));
    std::iota(m.perm.begin(), m.perm.end(), 0);
    m.kind = Kind::canonical;
    return m;
}

PartyMatching PartyMatching::swap() {
    PartyMatching m;
    m.perm = {1, 0};
    m.kind = Kind::swap;
    return m;
}

PartyMatching PartyMatching::party_aligned(std::size_t n) {
    if (n < 2) throw ValidationError("matching needs n >= 2");
    const SlotLayout layout{n};
    PartyMatching m;
    m.perm.resize(layout.slots());
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t copy = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            m.perm[layout.tau_slot(copy, j)] = layout.sigma_slot(k, j);
            ++copy;
        }
    }
    m.kind = n == 2 ? Kind::swap : Kind::party_aligned;
    return m;
}

PartyMatching PartyMatching::factor_order(std::size_t n, const std::vector<std::size_t>& factor_perm) {
    check_permutation(factor_perm, n);
    PartyMatching m;
    m.perm.resize(n * (n - 1));
    for (std::size_t pos = 0; pos < n; ++pos)
        for (std::size_t i = 0; i + 1 < n; ++i) m.perm[pos * (n - 1) + i] = factor_perm[pos] * (n - 1) + i;
    m.kind = Kind::factor_order;
    return m;
}

PartyMatching PartyMatching::explicit_list(std::size_t n, std::vector<std::size_t> perm) {
    if (n < 2) throw ValidationError("matching needs n >= 2");
    check_permutation(perm, n * (n - 1));
    PartyMatching m;
    m.perm = std::move(perm);
    m.kind = Kind::explicit_list;
    return m;
}

std::size_t PartyMatching::parties() const { return parties_for_slots(perm.size()); }

std::vector<std::size_t> PartyMatching::inverse() const { return inverse_permutation(perm); }

std::string PartyMatching::kind_name() const {
    switch (kind) {
        case Kind::canonical: return "canonical";
        case Kind::swap: return "swap";
        case Kind::party_aligned: return "party-aligned";
        case Kind::factor_order: return "factor-order";
        case Kind::explicit_list: return "explicit";
    }
    return "explicit";
}

std::string PartyMatching::describe() const {
    std::ostringstream os;
    os << kind_name() << " [";
    for (std::size_t t = 0; t < perm.size(); ++t) os << (t ? "," : "") << perm[t];
    os << "]";
    return os.str();
}

bool PartyMatching::is_party_consistent() const {
    const SlotLayout layout{parties()};
    for (std::size_t t = 0; t < perm.size(); ++t)
        if (layout.tau_party(t) != layout.sigma_party(perm[t])) return false;
    return true;
}

PartyMatching parse_matching(const std::string& spec, std::size_t n) {
    if (spec == "canonical") return PartyMatching::canonical(n);
    if (spec == "party-aligned") return PartyMatching::party_aligned(n);
    if (spec == "swap") {
        if (n != 2) throw ValidationError("the swap matching is only defined for n = 2");
        return PartyMatching::swap();
    }
    std::vector<std::size_t> perm;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(' ');
        item = first == std::string::npos ? "" : item.substr(first, item.find_last_not_of(' ') - first + 1);
        if (item.empty() || item.size() > 9 || item.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError("bad matching '" + spec + "': expected canonical, swap, party-aligned or a slot list");
        perm.push_back(std::stoul(item));
    }
    return PartyMatching::explicit_list(n, std::move(perm));
}

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) {
        f *= static_cast<double>(i);
        if (f > 1e300) return std::numeric_limits<double>::infinity();
    }
    return f;
}

std::vector<std::size_t> random_permutation(std::size_t size, Rng& rng) {
    std::vector<std::size_t> p(size);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = size; i > 1; --i) std::swap(p[i - 1], p[rng.index(i)]);
    return p;
}

}  // namespace dualcorr
