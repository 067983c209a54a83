#include "dualcorr/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "dualcorr/kernels.hpp"

namespace dualcorr {

SupportProjector support_projector(const SpectralDecomposition& sd, double cutoff) {
    if (!(cutoff > 0.0)) throw ValidationError("support cutoff must be positive");
    SupportProjector out;
    out.cutoff = cutoff;
    out.projector = sd.reconstruct([&](double l) { return l > cutoff ? 1.0 : 0.0; });
    out.rank = static_cast<std::size_t>(
        std::count_if(sd.values.begin(), sd.values.end(), [&](double l) { return l > cutoff; }));
    return out;
}

SupportProjector support_projector(const MultipartiteState& s, double cutoff) {
    auto sd = eig_hermitian(s.matrix());
    s.validate_spectrum(sd.values);
    return support_projector(sd, cutoff);
}

Containment support_contained(const ComplexMatrix& tau, const SupportProjector& sigma_support, double tol) {
    const ComplexMatrix& p = sigma_support.projector;
    if (p.dim() != tau.dim()) throw ValidationError("support_contained: dimension mismatch");
    // tr(P tau) = sum_i <tau_row_i, P_row_i> for Hermitian tau
    double inside = 0.0;
    for (std::size_t i = 0; i < tau.dim(); ++i) inside += kernels::dotc(tau.row(i), p.row(i), tau.dim()).real();
    const double residual = tau.trace().real() - inside;
    return {residual <= tol, residual};
}

Containment support_contained(const MultipartiteState& tau, const MultipartiteState& sigma, double tol,
                              double cutoff) {
    if (tau.dim() != sigma.dim()) throw ValidationError("support_contained: dimension mismatch");
    return support_contained(tau.matrix(), support_projector(sigma, cutoff), tol);
}

std::string to_string(JRoute r) {
    switch (r) {
        case JRoute::automatic: return "automatic";
        case JRoute::dense: return "dense";
        case JRoute::factored: return "factored";
    }
    return "automatic";
}

namespace {

std::size_t uniform_local_dim(const MultipartiteState& rho) {
    const auto& dims = rho.party_dims();
    if (rho.parties() < 2) throw ValidationError("J_n needs at least 2 parties");
    for (std::size_t d : dims)
        if (d != dims.front())
            throw UnsupportedConfigError("J_n requires every party to have the same local dimension");
    return dims.front();
}

ComplexMatrix restricted_log2(const SpectralDecomposition& sd, double cutoff) {
    return sd.reconstruct([&](double l) { return l > cutoff ? std::log2(l) : 0.0; });
}

}  // namespace

JSpace::JSpace(const MultipartiteState& rho, const Tolerances& tol)
    : tol_(tol),
      layout_{rho.parties()},
      local_dim_(uniform_local_dim(rho)),
      dim_(0),
      slot_dims_(layout_.slots(), local_dim_),
      rho_(rho) {
    dim_ = checked_product(slot_dims_, tol.max_dim);
    rho_spectrum_ = eig_hermitian(rho_.matrix());
    rho_.validate_spectrum(rho_spectrum_.values, tol);
    for (std::size_t k = 0; k < layout_.n; ++k) {
        marginals_.push_back(partial_trace(rho_, {k}));
        const auto sd = eig_hermitian(marginals_.back().matrix());
        marginal_support_.push_back(support_projector(sd, tol.eig_cutoff));
        marginal_log_.push_back(restricted_log2(sd, tol.eig_cutoff));
    }
}

JRoute JSpace::resolve(JRoute r) const {
    if (r != JRoute::automatic) return r;
    return dim_ <= tol_.dense_route_limit ? JRoute::dense : JRoute::factored;
}

MultipartiteState JSpace::tau_dense() const {
    MultipartiteState tau = rho_;
    for (std::size_t c = 1; c + 1 < layout_.n; ++c) tau = tensor(tau, rho_, tol_.max_dim);
    return tau;
}

MultipartiteState JSpace::sigma_dense() const {
    MultipartiteState sigma = marginals_.front();
    for (std::size_t k = 1; k < layout_.n; ++k) sigma = tensor(sigma, marginals_[k], tol_.max_dim);
    return sigma;
}

void JSpace::check(const PartyMatching& m) const {
    if (m.perm.size() != layout_.slots())
        throw ValidationError("matching has " + std::to_string(m.perm.size()) + " slots, expected " +
                              std::to_string(layout_.slots()));
    check_permutation(m.perm, layout_.slots());
}

MultipartiteState JSpace::sigma_matched_dense(const PartyMatching& m) const {
    check(m);
    return permute_subsystems(sigma_dense(), m.perm);
}

double JSpace::residual_factored(const PartyMatching& m) const {
    check(m);
    const std::size_t n = layout_.n;
    const auto inv = m.inverse();
    // Sigma factor k sits on the tau slots paired with its own slots.
    std::vector<std::vector<std::size_t>> factor_slots(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i + 1 < n; ++i) factor_slots[k].push_back(inv[k * (n - 1) + i]);

    std::vector<std::size_t> support;
    for (std::size_t a = 0; a < rho_spectrum_.values.size(); ++a)
        if (rho_spectrum_.values[a] > tol_.eig_cutoff) support.push_back(a);
    std::vector<std::vector<cplx>> eigvecs;
    for (std::size_t a : support) eigvecs.push_back(rho_spectrum_.vector(a));

    // Enumerate eigen-products u_{a_1} (x) ... (x) u_{a_{n-1}} of tau.
    const std::size_t copies = n - 1;
    std::vector<std::size_t> idx(copies, 0);
    double residual = 0.0;
    while (true) {
        double weight = 1.0;
        std::vector<cplx> w{1.0};
        for (std::size_t c = 0; c < copies; ++c) {
            weight *= rho_spectrum_.values[support[idx[c]]];
            const auto& u = eigvecs[idx[c]];
            std::vector<cplx> next(w.size() * u.size());
            for (std::size_t x = 0; x < w.size(); ++x)
                for (std::size_t y = 0; y < u.size(); ++y) next[x * u.size() + y] = w[x] * u[y];
            w = std::move(next);
        }
        std::vector<cplx> pw = w;
        for (std::size_t k = 0; k < n; ++k)
            apply_to_slots(pw, slot_dims_, factor_slots[k], marginal_support_[k].projector);
        const double inside = kernels::dotc(w.data(), pw.data(), w.size()).real();
        residual += weight * (1.0 - inside);

        std::size_t c = copies;
        while (c > 0 && ++idx[c - 1] == support.size()) idx[--c] = 0;
        if (c == 0) break;
    }
    return residual;
}

double JSpace::tau_log_tau_factored() const {
    double s = 0.0;
    for (double l : rho_spectrum_.values)
        if (l > tol_.eig_cutoff) s += l * std::log2(l);
    return static_cast<double>(layout_.n - 1) * s;
}

MultipartiteState JSpace::tau_reduced(const std::vector<std::size_t>& tau_slots) const {
    const std::size_t n = layout_.n;
    // Group the requested slots by copy, keeping the request order within a copy.
    std::vector<std::vector<std::size_t>> per_copy(n - 1);
    for (std::size_t t : tau_slots) {
        if (t >= layout_.slots()) throw ValidationError("tau slot out of range");
        per_copy[layout_.tau_copy(t)].push_back(layout_.tau_party(t));
    }
    std::optional<MultipartiteState> product;
    std::vector<std::size_t> grouped;  // tau slot at each position of `product`
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (per_copy[c].empty()) continue;
        auto piece = reduced_state(rho_, per_copy[c]);
        product = product ? tensor(*product, piece, tol_.max_dim) : piece;
        for (std::size_t j : per_copy[c]) grouped.push_back(layout_.tau_slot(c, j));
    }
    if (!product) throw ValidationError("tau_reduced: no slots requested");
    std::vector<std::size_t> perm(tau_slots.size());
    for (std::size_t q = 0; q < tau_slots.size(); ++q)
        perm[q] = static_cast<std::size_t>(std::find(grouped.begin(), grouped.end(), tau_slots[q]) - grouped.begin());
    return permute_subsystems(*product, perm);
}

double JSpace::tau_log_sigma_factored(const PartyMatching& m) const {
    check(m);
    const std::size_t n = layout_.n;
    const auto inv = m.inverse();
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i + 1 < n; ++i) slots.push_back(inv[k * (n - 1) + i]);
        const auto reduced = tau_reduced(slots);
        acc += trace_of_product(reduced.matrix(), marginal_log_[k]).real();
    }
    return acc;
}

MatchingVerdict evaluate_matching(const JSpace& space, const PartyMatching& m, JRoute route,
                                  const Tolerances& tol) {
    MatchingVerdict v{m, false, 0.0};
    if (space.resolve(route) == JRoute::dense) {
        const auto tau = space.tau_dense();
        const auto sigma = space.sigma_matched_dense(m);
        const auto c = support_contained(tau, sigma, tol.support, tol.eig_cutoff);
        v.contained = c.contained;
        v.residual = c.residual;
    } else {
        v.residual = space.residual_factored(m);
        v.contained = v.residual <= tol.support;
    }
    return v;
}

namespace {

// Per-scan evaluator: the dense route diagonalizes sigma once and conjugates
// its support projector by each matching, since supp(pi sigma pi^-1) = pi supp(sigma).
class ScanEvaluator {
public:
    ScanEvaluator(const JSpace& space, JRoute route, const Tolerances& tol)
        : space_(space), route_(route), tol_(tol) {
        if (route_ == JRoute::dense) {
            tau_ = space.tau_dense().matrix();
            sigma_support_ = support_projector(space.sigma_dense(), tol.eig_cutoff);
        }
    }

    MatchingVerdict operator()(const PartyMatching& m) const {
        MatchingVerdict v{m, false, 0.0};
        if (route_ == JRoute::dense) {
            SupportProjector pm{permute_operator(sigma_support_.projector, space_.slot_dims(), m.perm),
                                sigma_support_.rank, sigma_support_.cutoff};
            const auto c = support_contained(tau_, pm, tol_.support);
            v.contained = c.contained;
            v.residual = c.residual;
        } else {
            v.residual = space_.residual_factored(m);
            v.contained = v.residual <= tol_.support;
        }
        return v;
    }

private:
    const JSpace& space_;
    JRoute route_;
    Tolerances tol_;
    ComplexMatrix tau_;
    SupportProjector sigma_support_;
};

void record(MatchingScanReport& r, MatchingVerdict v) {
    ++r.total;
    if (!v.contained) {
        ++r.failing;
        if (!r.example_failing) r.example_failing = v;
    } else if (!r.example_passing) {
        r.example_passing = v;
    }
    if (r.total == 1) {
        r.min_residual = r.max_residual = v.residual;
    } else {
        r.min_residual = std::min(r.min_residual, v.residual);
        r.max_residual = std::max(r.max_residual, v.residual);
    }
    r.verdicts.push_back(std::move(v));
}

}  // namespace

std::vector<MatchingVerdict> evaluate_matchings(const MultipartiteState& rho,
                                                const std::vector<PartyMatching>& matchings,
                                                const Tolerances& tol, JRoute route) {
    const JSpace space(rho, tol);
    const ScanEvaluator eval(space, space.resolve(route), tol);
    std::vector<MatchingVerdict> out;
    out.reserve(matchings.size());
    for (const auto& m : matchings) out.push_back(eval(m));
    return out;
}

MatchingScanReport scan_matchings(const MultipartiteState& rho, const ScanMode& mode, const Tolerances& tol,
                                  JRoute route) {
    const JSpace space(rho, tol);
    const std::size_t n = space.parties();
    const std::size_t slots = space.layout().slots();

    MatchingScanReport report;
    report.n = n;
    report.mode = mode;
    report.route = space.resolve(route);
    const ScanEvaluator eval(space, report.route, tol);

    if (mode.kind == ScanMode::Kind::exhaustive) {
        const double count = factorial(slots);
        if (count > static_cast<double>(tol.exhaustive_budget))
            throw BudgetExceededError("exhaustive scan over " + std::to_string(slots) + "! matchings exceeds budget " +
                                      std::to_string(tol.exhaustive_budget) + "; use sampled mode");
        std::vector<std::size_t> perm(slots);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            auto m = PartyMatching::explicit_list(n, perm);
            if (perm == PartyMatching::canonical(n).perm) m.kind = PartyMatching::Kind::canonical;
            record(report, eval(m));
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        Rng rng(mode.seed);
        for (std::size_t i = 0; i < mode.count; ++i)
            record(report, eval(PartyMatching::explicit_list(n, random_permutation(slots, rng))));
    }

    if (factorial(n) <= static_cast<double>(tol.exhaustive_budget)) {
        std::vector<std::size_t> fperm(n);
        std::iota(fperm.begin(), fperm.end(), 0);
        do {
            ++report.factor_order_total;
            if (!eval(PartyMatching::factor_order(n, fperm)).contained) ++report.factor_order_failing;
        } while (std::next_permutation(fperm.begin(), fperm.end()));
    }
    return report;
}

}  // namespace dualcorr
