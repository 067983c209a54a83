#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dualcorr/entropy.hpp"
#include "dualcorr/states.hpp"
#include "dualcorr/support.hpp"

using namespace dualcorr;

namespace {

MultipartiteState diag_state(std::initializer_list<double> d, std::vector<std::size_t> dims) {
    return MultipartiteState(ComplexMatrix::diagonal(d), std::move(dims));
}

void check_projector(const SupportProjector& sp) {
    const auto& p = sp.projector;
    CHECK(max_abs_diff(p * p, p) <= 1e-8);
    CHECK(p.hermiticity_deviation() <= 1e-10);
    CHECK(std::abs(p.trace().real() - static_cast<double>(sp.rank)) < 0.5);
}

MultipartiteState mix(const MultipartiteState& a, const MultipartiteState& b, double alpha) {
    ComplexMatrix m = cplx(alpha) * a.matrix() + cplx(1 - alpha) * b.matrix();
    Tolerances loose;
    loose.trace = 1e-9;
    return MultipartiteState(std::move(m), a.party_dims(), loose);
}

}  // namespace

TEST_SUITE("support") {

TEST_CASE("support projector of a pure state") {
    const auto sp = support_projector(diag_state({1, 0}, {2}));
    CHECK(sp.rank == 1);
    CHECK(max_abs_diff(sp.projector, ComplexMatrix::diagonal({1, 0})) <= 1e-15);
    check_projector(sp);
}

TEST_CASE("support projector of a full-rank state") {
    const auto sp = support_projector(diag_state({0.5, 0.5}, {2}));
    CHECK(sp.rank == 2);
    CHECK(max_abs_diff(sp.projector, ComplexMatrix::identity(2)) <= 1e-15);
}

TEST_CASE("support projector of a two-party GHZ marginal") {
    // diag(0.3, 0, 0, 0.7): support spanned by |00> and |11>.
    const auto marginal = partial_trace(ghz({3, 0.3}), {2});
    const auto sp = support_projector(marginal);
    CHECK(sp.rank == 2);
    CHECK(max_abs_diff(sp.projector, ComplexMatrix::diagonal({1, 0, 0, 1})) <= 1e-12);
    check_projector(sp);
}

TEST_CASE("support projectors of random states are projectors") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rho = random_state({{2, 2}, seed, seed % 2 ? Ensemble::pure_haar : Ensemble::hilbert_schmidt});
        const auto sp = support_projector(rho);
        CHECK(sp.rank == (seed % 2 ? 1u : 4u));
        check_projector(sp);
    }
    // Rank-deficient mixed state.
    const auto a = random_state({{2, 2}, 1, Ensemble::pure_haar});
    const auto b = random_state({{2, 2}, 2, Ensemble::pure_haar});
    const auto sp = support_projector(mix(a, b, 0.4));
    CHECK(sp.rank == 2);
    check_projector(sp);
}

TEST_CASE("a bipartite state is supported on the product of its marginals") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rho = random_state({{2, 2}, seed, seed % 2 ? Ensemble::pure_haar : Ensemble::hilbert_schmidt});
        const auto prod = tensor(partial_trace(rho, {1}), partial_trace(rho, {0}));
        CHECK(support_contained(rho, prod).contained);
    }
    const auto g = ghz({2, 0.3});
    CHECK(support_contained(g, tensor(partial_trace(g, {1}), partial_trace(g, {0}))).contained);
}

TEST_CASE("the swapped product of marginals can miss the support") {
    const auto rho = orthogonal_product(2, 2);
    const auto rho1 = partial_trace(rho, {1});
    const auto rho2 = partial_trace(rho, {0});
    const auto c = support_contained(rho, tensor(rho2, rho1));
    CHECK_FALSE(c.contained);
    CHECK(c.residual == doctest::Approx(1.0));
}

TEST_CASE("support containment is reflexive") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto rho = random_state({{2, 3}, seed, seed % 2 ? Ensemble::pure_haar : Ensemble::hilbert_schmidt});
        const auto c = support_contained(rho, rho);
        CHECK(c.contained);
        CHECK(std::abs(c.residual) <= 1e-12);
    }
}

TEST_CASE("support containment is stable under mixing") {
    Rng rng(4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // sigma of rank 2 in dimension 4; tau and tau' drawn inside its support.
        const auto a = random_state({{4}, 3 * seed, Ensemble::pure_haar});
        const auto b = random_state({{4}, 3 * seed + 1, Ensemble::pure_haar});
        const auto sigma = mix(a, b, 0.5);
        const auto tau1 = mix(a, b, 0.9);
        const auto tau2 = mix(a, b, 0.2);
        REQUIRE(support_contained(tau1, sigma).contained);
        REQUIRE(support_contained(tau2, sigma).contained);
        const double alpha = rng.uniform();
        CHECK(support_contained(mix(tau1, tau2, alpha), sigma).contained);
        // An outside state stays outside whatever it is mixed with.
        const auto c = random_state({{4}, 3 * seed + 2, Ensemble::pure_haar});
        CHECK_FALSE(support_contained(mix(tau1, c, 0.5), sigma).contained);
    }
}

TEST_CASE("residual mass is permutation covariant") {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto tau = random_state({{2, 2, 2}, seed, Ensemble::hilbert_schmidt});
        const auto a = random_state({{2, 2, 2}, seed + 50, Ensemble::pure_haar});
        const auto b = random_state({{2, 2, 2}, seed + 60, Ensemble::pure_haar});
        const auto sigma = mix(a, b, 0.3);
        const auto perm = random_permutation(3, rng);
        const auto inv = inverse_permutation(perm);
        const double lhs = support_contained(tau, permute_subsystems(sigma, perm)).residual;
        const double rhs = support_contained(permute_subsystems(tau, inv), sigma).residual;
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("support containment rejects mismatched dimensions") {
    CHECK_THROWS_AS(support_contained(diag_state({1, 0}, {2}), diag_state({1, 0, 0}, {3})), ValidationError);
}

TEST_CASE("slot layout bookkeeping") {
    const SlotLayout l{3};
    CHECK(l.slots() == 6);
    CHECK(l.tau_slot(1, 2) == 5);
    CHECK(l.tau_party(5) == 2);
    CHECK(l.tau_copy(5) == 1);
    // Factor 1 of sigma holds parties 0 and 2.
    CHECK(l.sigma_slot(1, 0) == 2);
    CHECK(l.sigma_slot(1, 2) == 3);
    CHECK(l.sigma_party(2) == 0);
    CHECK(l.sigma_party(3) == 2);
    CHECK(l.sigma_factor(3) == 1);
    CHECK(l.tau_labels() == std::vector<std::string>{"c0.p0", "c0.p1", "c0.p2", "c1.p0", "c1.p1", "c1.p2"});
    CHECK(l.sigma_labels() == std::vector<std::string>{"f0.p1", "f0.p2", "f1.p0", "f1.p2", "f2.p0", "f2.p1"});
}

TEST_CASE("named matchings") {
    CHECK(PartyMatching::canonical(3).perm == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    CHECK(PartyMatching::swap().perm == std::vector<std::size_t>{1, 0});
    CHECK(PartyMatching::swap().is_party_consistent());
    CHECK_FALSE(PartyMatching::canonical(2).is_party_consistent());
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
        const auto m = PartyMatching::party_aligned(n);
        CHECK(m.is_party_consistent());
        CHECK(m.parties() == n);
    }
    const auto f = PartyMatching::factor_order(3, {2, 0, 1});
    CHECK(f.perm == std::vector<std::size_t>{4, 5, 0, 1, 2, 3});
    CHECK_THROWS_AS(PartyMatching::explicit_list(3, {0, 1, 2, 3, 4, 4}), ValidationError);
    CHECK_THROWS_AS(PartyMatching::explicit_list(3, {0, 1, 2}), ValidationError);
}

TEST_CASE("matching inverse composes to the identity") {
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto m = PartyMatching::explicit_list(4, random_permutation(12, rng));
        const auto inv = m.inverse();
        for (std::size_t t = 0; t < 12; ++t) {
            CHECK(inv[m.perm[t]] == t);
            CHECK(m.perm[inv[t]] == t);
        }
    }
}

TEST_CASE("parse_matching") {
    CHECK(parse_matching("canonical", 3) == PartyMatching::canonical(3));
    CHECK(parse_matching("swap", 2) == PartyMatching::swap());
    CHECK(parse_matching("party-aligned", 3) == PartyMatching::party_aligned(3));
    CHECK(parse_matching("1,0", 2) == PartyMatching::swap());
    CHECK(parse_matching(" 5, 4,3,2,1,0 ", 3).perm == std::vector<std::size_t>{5, 4, 3, 2, 1, 0});
    CHECK_THROWS_AS(parse_matching("swap", 3), ValidationError);
    CHECK_THROWS_AS(parse_matching("0,1,x", 2), ValidationError);
    CHECK_THROWS_AS(parse_matching("0,0", 2), ValidationError);
    CHECK_THROWS_AS(parse_matching("", 2), ValidationError);
}

TEST_CASE("random permutations are uniform enough and valid") {
    Rng rng(6);
    std::set<std::vector<std::size_t>> seen;
    for (int i = 0; i < 600; ++i) {
        const auto p = random_permutation(3, rng);
        CHECK_NOTHROW(check_permutation(p, 3));
        seen.insert(p);
    }
    CHECK(seen.size() == 6);
    CHECK(factorial(6) == 720.0);
    CHECK(std::isinf(factorial(200)));
}

TEST_CASE("exhaustive scan of GHZ at n = 3") {
    const auto r = scan_matchings(ghz({3, 0.5}), ScanMode::exhaustive());
    CHECK(r.n == 3);
    CHECK(r.total == 720);
    CHECK(r.failing == 720);
    CHECK(r.verdicts.size() == 720);
    CHECK(r.min_residual > 1e-6);
    CHECK(r.example_failing.has_value());
    CHECK_FALSE(r.example_passing.has_value());
    CHECK(r.factor_order_total == 6);
    CHECK(r.factor_order_failing == 6);
}

TEST_CASE("sampled scan of GHZ at n = 4") {
    const auto r = scan_matchings(ghz({4, 0.5}), ScanMode::sampled(500, 17));
    CHECK(r.total == 500);
    CHECK(r.failing == 500);
    CHECK(r.min_residual > 1e-6);
    CHECK(r.route == JRoute::factored);
    // The factor-order subset (4! = 24) is small enough to cover entirely.
    CHECK(r.factor_order_total == 24);
    CHECK(r.factor_order_failing == 24);
}

TEST_CASE("sampled scans are deterministic in their seed") {
    const auto a = scan_matchings(ghz({3, 0.4}), ScanMode::sampled(20, 5));
    const auto b = scan_matchings(ghz({3, 0.4}), ScanMode::sampled(20, 5));
    REQUIRE(a.verdicts.size() == b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
        CHECK(a.verdicts[i].matching == b.verdicts[i].matching);
        CHECK(a.verdicts[i].residual == b.verdicts[i].residual);
    }
}

TEST_CASE("exhaustive scan of the n = 2 orthogonal product") {
    const auto r = scan_matchings(orthogonal_product(2, 2), ScanMode::exhaustive());
    CHECK(r.total == 2);
    CHECK(r.failing == 1);
    REQUIRE(r.example_passing.has_value());
    REQUIRE(r.example_failing.has_value());
    CHECK(r.example_passing->matching.perm == PartyMatching::swap().perm);
    CHECK(r.example_failing->matching.perm == PartyMatching::canonical(2).perm);
}

TEST_CASE("exhaustive scan refuses to exceed its budget") {
    CHECK_THROWS_AS(scan_matchings(ghz({4, 0.5}), ScanMode::exhaustive()), BudgetExceededError);
    Tolerances tight;
    tight.exhaustive_budget = 100;
    CHECK_THROWS_AS(scan_matchings(ghz({3, 0.5}), ScanMode::exhaustive(), tight), BudgetExceededError);
}

TEST_CASE("dense and factored containment verdicts agree") {
    Rng rng(10);
    const std::vector<MultipartiteState> inputs{ghz({3, 0.2}), random_state({{2, 2, 2}, 1, Ensemble::pure_haar})};
    for (const auto& rho : inputs) {
        const JSpace space(rho);
        for (int i = 0; i < 40; ++i) {
            const auto m = PartyMatching::explicit_list(3, random_permutation(6, rng));
            const auto d = evaluate_matching(space, m, JRoute::dense);
            const auto f = evaluate_matching(space, m, JRoute::factored);
            CHECK(d.contained == f.contained);
            CHECK(std::abs(d.residual - f.residual) <= 1e-9);
        }
    }
}

TEST_CASE("scan requires uniform local dimensions") {
    CHECK_THROWS_AS(scan_matchings(random_state({{2, 3}, 0, Ensemble::hilbert_schmidt}), ScanMode::exhaustive()),
                    UnsupportedConfigError);
}

}  // TEST_SUITE
