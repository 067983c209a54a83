#include "doctest.h"

#include <bit>
#include <numeric>
#include <set>

#include "dualcorr/oracle.hpp"
#include "dualcorr/states.hpp"

using namespace dualcorr;
using namespace dualcorr::oracle;

namespace {

std::multiset<std::size_t> ms(std::initializer_list<std::size_t> v) { return {v.begin(), v.end()}; }

// Independent enumeration of the tau strings: for every subset of copies,
// set all n slots of each chosen copy.
std::set<std::uint64_t> tau_strings_by_subsets(std::size_t n) {
    const std::size_t w = n * (n - 1);
    std::set<std::uint64_t> out;
    for (std::uint64_t subset = 0; subset < (1ULL << (n - 1)); ++subset) {
        std::string s(w, '0');
        for (std::size_t c = 0; c < n - 1; ++c)
            if (subset >> c & 1) std::fill(s.begin() + c * n, s.begin() + (c + 1) * n, '1');
        out.insert(from_bitstring(s));
    }
    return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("bitstring helpers") {
    CHECK(to_bitstring(from_bitstring("111000"), 6) == "111000");
    CHECK(from_bitstring("100") == 4);
    CHECK(bit_of_slot(6, 0) == 32);
    CHECK(bit_of_slot(6, 5) == 1);
    CHECK_THROWS_AS(from_bitstring("10a"), ValidationError);
}

TEST_CASE("tau vector at n = 2") {
    const auto v = ghz_tau_vector(2);
    CHECK(v.width == 2);
    REQUIRE(v.terms.size() == 2);
    CHECK(v.terms.count(from_bitstring("00")) == 1);
    CHECK(v.terms.count(from_bitstring("11")) == 1);
    CHECK(v.weights() == ms({0, 2}));
}

TEST_CASE("tau vector at n = 3 and n = 4") {
    const auto v3 = ghz_tau_vector(3);
    CHECK(v3.terms.size() == 4);
    CHECK(v3.weights() == ms({0, 3, 3, 6}));
    const auto v4 = ghz_tau_vector(4);
    CHECK(v4.terms.size() == 8);
    CHECK(v4.weights() == ms({0, 4, 4, 4, 8, 8, 8, 12}));
}

TEST_CASE("tau vector terms match subset enumeration") {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto v = ghz_tau_vector(n);
        std::set<std::uint64_t> keys;
        for (const auto& [bits, amp] : v.terms) {
            keys.insert(bits);
            // Exponents: one sqrt(p) per all-zero copy, one sqrt(1-p) per all-one copy.
            const auto w = static_cast<unsigned>(std::popcount(bits));
            CHECK(amp.ones == w / n);
            CHECK(amp.zeros == (n - 1) - w / n);
        }
        CHECK(keys == tau_strings_by_subsets(n));
        CHECK(v.terms.size() == (1u << (n - 1)));
    }
    CHECK_THROWS_AS(ghz_tau_vector(9), SizeLimitError);
    CHECK_THROWS_AS(ghz_tau_vector(1), ValidationError);
}

TEST_CASE("degenerate branches keep one tau term") {
    const auto zeros = ghz_tau_vector(3, Branches::zeros_only);
    REQUIRE(zeros.terms.size() == 1);
    CHECK(zeros.terms.begin()->first == 0);
    const auto ones = ghz_tau_vector(3, Branches::ones_only);
    REQUIRE(ones.terms.size() == 1);
    CHECK(ones.terms.begin()->first == from_bitstring("111111"));
    CHECK(branches_for(0.0) == Branches::ones_only);
    CHECK(branches_for(1.0) == Branches::zeros_only);
    CHECK(branches_for(0.5) == Branches::both);
    CHECK_THROWS_AS(branches_for(1.5), ValidationError);
}

TEST_CASE("sigma support at n = 2") {
    const auto s = ghz_sigma_support(2);
    CHECK(s.block_lengths == std::vector<std::size_t>{1, 1});
    const auto m = s.members();
    CHECK(std::set<std::uint64_t>(m.begin(), m.end()) == std::set<std::uint64_t>{0, 1, 2, 3});
}

TEST_CASE("sigma support at n = 3") {
    const auto s = ghz_sigma_support(3);
    CHECK(s.block_lengths == std::vector<std::size_t>{2, 2, 2});
    const auto m = s.members();
    CHECK(m.size() == 8);
    std::multiset<std::size_t> w;
    for (auto b : m) w.insert(static_cast<std::size_t>(std::popcount(b)));
    CHECK(w == ms({0, 2, 2, 2, 4, 4, 4, 6}));
    // Blocks are (slots 0-1, 2-3, 4-5).
    CHECK(s.contains(from_bitstring("110000")));
    CHECK(s.contains(from_bitstring("001111")));
    CHECK_FALSE(s.contains(from_bitstring("110100")));
    // The weight-3 tau string of copy 0 straddles the middle block.
    CHECK_FALSE(s.contains(from_bitstring("111000")));
}

TEST_CASE("sigma membership agrees with its member list") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const auto s = ghz_sigma_support(n);
        const auto m = s.members();
        const std::set<std::uint64_t> members(m.begin(), m.end());
        CHECK(members.size() == (1u << n));
        for (std::uint64_t b = 0; b < (1ULL << s.width); ++b) CHECK(s.contains(b) == (members.count(b) == 1));
    }
}

TEST_CASE("weight sets") {
    for (std::size_t n = 2; n <= 8; ++n) {
        std::set<std::size_t> tw, sw;
        for (std::size_t c = 0; c < n; ++c) tw.insert(c * n);
        for (std::size_t c = 0; c <= n; ++c) sw.insert(c * (n - 1));
        CHECK(tau_weights(n) == tw);
        CHECK(sigma_weights(n) == sw);

        const auto v = ghz_tau_vector(n);
        std::set<std::size_t> from_terms;
        for (auto w : v.weights()) from_terms.insert(w);
        CHECK(from_terms == tw);

        CHECK(shared_weights(n) == shared_weights_by_gcd(n));
        if (n >= 3) CHECK(shared_weights(n) == std::set<std::size_t>{0, n * (n - 1)});
    }
    CHECK(shared_weights(2) == std::set<std::size_t>{0, 2});
    CHECK(sigma_weights(2) == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("n = 2 is contained under the party-matched order") {
    const auto v = containment_verdict(2, PartyMatching::swap());
    CHECK(v.contained);
    CHECK_FALSE(v.witness.has_value());
    // sigma is full rank at n = 2, so the other order is contained as well.
    CHECK(containment_verdict(2, PartyMatching::canonical(2)).contained);
    CHECK(containment_verdict_all(2).contained);
}

TEST_CASE("n = 3 identity matching fails with a weight-3 witness") {
    const auto v = containment_verdict(3, PartyMatching::canonical(3));
    CHECK_FALSE(v.contained);
    REQUIRE(v.witness.has_value());
    CHECK(std::popcount(*v.witness) == 3);
    CHECK_FALSE(ghz_sigma_support(3).contains(*v.witness));
}

TEST_CASE("no matching works for n = 3..8") {
    for (std::size_t n = 3; n <= 8; ++n) {
        const auto v = containment_verdict_all(n);
        CHECK_FALSE(v.contained);
        REQUIRE(v.witness.has_value());
        CHECK(static_cast<std::size_t>(std::popcount(*v.witness)) == n);
        CHECK(v.method == "weight-arithmetic");
    }
    CHECK(to_bitstring(*containment_verdict_all(3).witness, 6) == "111000");
}

TEST_CASE("weight argument agrees with direct membership on random matchings") {
    Rng rng(99);
    for (std::size_t n = 3; n <= 8; ++n) {
        const auto all = containment_verdict_all(n);
        for (int i = 0; i < 100; ++i) {
            const auto m = PartyMatching::explicit_list(n, random_permutation(n * (n - 1), rng));
            const auto v = containment_verdict(n, m);
            CHECK(v.contained == all.contained);
            CHECK(v.method == "membership");
        }
    }
}

TEST_CASE("degenerate branches are contained under every matching") {
    Rng rng(1);
    for (auto b : {Branches::zeros_only, Branches::ones_only}) {
        CHECK(containment_verdict_all(3, b).contained);
        for (int i = 0; i < 20; ++i) {
            const auto m = PartyMatching::explicit_list(3, random_permutation(6, rng));
            CHECK(containment_verdict(3, m, b).contained);
        }
    }
}

TEST_CASE("dense and exact verdicts agree on all 720 matchings at n = 3") {
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<PartyMatching> all;
    do all.push_back(PartyMatching::explicit_list(3, perm));
    while (std::next_permutation(perm.begin(), perm.end()));

    const auto r = cross_check_dense(3, 0.5, all);
    CHECK(r.total == 720);
    CHECK(r.all_agree());
    CHECK(r.dense_contained == 0);
    CHECK(r.exact_contained == 0);
}

TEST_CASE("dense and exact verdicts agree at n = 2") {
    const auto r = cross_check_dense(2, 0.3, {PartyMatching::canonical(2), PartyMatching::swap()});
    CHECK(r.total == 2);
    CHECK(r.all_agree());
    CHECK(r.exact_contained == 2);
}

TEST_CASE("dense and exact verdicts agree in the degenerate case") {
    Rng rng(3);
    std::vector<PartyMatching> ms;
    for (int i = 0; i < 30; ++i) ms.push_back(PartyMatching::explicit_list(3, random_permutation(6, rng)));
    for (double p : {0.0, 1.0}) {
        const auto r = cross_check_dense(3, p, ms);
        CHECK(r.all_agree());
        CHECK(r.exact_contained == ms.size());
    }
}

TEST_CASE("scan verdicts can be compared against the oracle") {
    const auto scan = scan_matchings(ghz({4, 0.3}), ScanMode::sampled(40, 8));
    const auto r = compare_with_scan(4, 0.3, scan);
    CHECK(r.total == 40);
    CHECK(r.all_agree());
    CHECK(r.route == JRoute::factored);
}

TEST_CASE("a disagreement is a hard failure with a dump") {
    AgreementReport r;
    r.n = 3;
    r.p = 0.5;
    r.total = 1;
    r.agreed = 0;
    r.disagreements.push_back({PartyMatching::canonical(3), true, 0.0, false, from_bitstring("111000")});
    const AgreementFailure f(r);
    CHECK(std::string(f.what()).find("disagree") != std::string::npos);
    CHECK(f.report().dump().find("111000") != std::string::npos);
}

}  // TEST_SUITE
