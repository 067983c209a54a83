#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualcorr/matching.hpp"
#include "dualcorr/state.hpp"

namespace dualcorr {

/// Orthogonal projector onto the span of eigenvectors with eigenvalue > cutoff.
struct SupportProjector {
    ComplexMatrix projector;
    std::size_t rank = 0;
    double cutoff = 0.0;
};

SupportProjector support_projector(const SpectralDecomposition& sd, double cutoff);
SupportProjector support_projector(const MultipartiteState& s, double cutoff = default_tolerances().eig_cutoff);

struct Containment {
    bool contained = false;
    double residual = 0.0;  ///< tr((I - P_sigma) tau)
};

/// Tests supp(tau) within supp(sigma) through the residual mass tr((I - P_sigma) tau).
Containment support_contained(const MultipartiteState& tau, const MultipartiteState& sigma,
                              double tol = default_tolerances().support,
                              double cutoff = default_tolerances().eig_cutoff);
Containment support_contained(const ComplexMatrix& tau, const SupportProjector& sigma_support,
                              double tol = default_tolerances().support);

/// How the J_n operands are evaluated.
///  dense:    tau and sigma are built as full matrices and diagonalized.
///  factored: only rho and the n marginals are diagonalized; everything on
///            the n(n-1)-slot register is applied through per-factor
///            operators acting on state vectors.
enum class JRoute { automatic, dense, factored };

std::string to_string(JRoute r);

/// The J_n register for one state: layouts, dense operands on demand, and the
/// factored spectral data. Construction requires uniform local dimension and
/// a register dimension within tol.max_dim.
class JSpace {
public:
    explicit JSpace(const MultipartiteState& rho, const Tolerances& tol = default_tolerances());

    std::size_t parties() const { return layout_.n; }
    std::size_t local_dim() const { return local_dim_; }
    std::size_t dim() const { return dim_; }
    const SlotLayout& layout() const { return layout_; }
    const std::vector<std::size_t>& slot_dims() const { return slot_dims_; }
    const MultipartiteState& rho() const { return rho_; }
    const std::vector<MultipartiteState>& marginals() const { return marginals_; }

    JRoute resolve(JRoute r) const;

    /// rho^{(x)(n-1)} as a dense state.
    MultipartiteState tau_dense() const;
    /// (x)_k tr_k rho as a dense state.
    MultipartiteState sigma_dense() const;
    /// permute_subsystems(sigma_dense(), m.perm)
    MultipartiteState sigma_matched_dense(const PartyMatching& m) const;

    /// Residual mass of tau outside supp(pi sigma pi^-1), factored route.
    double residual_factored(const PartyMatching& m) const;

    /// -(n-1) S(rho) in bits, from the spectrum of rho.
    double tau_log_tau_factored() const;
    /// tr(tau log2 sigma_matched) with the log restricted to the support of
    /// each marginal. Equal to the restricted tr(tau log2 sigma_matched)
    /// whenever supp(tau) is contained in supp(sigma_matched).
    double tau_log_sigma_factored(const PartyMatching& m) const;

    /// Reduced state of tau on the given tau slots, in the listed order.
    MultipartiteState tau_reduced(const std::vector<std::size_t>& tau_slots) const;

private:
    void check(const PartyMatching& m) const;

    Tolerances tol_;
    SlotLayout layout_;
    std::size_t local_dim_;
    std::size_t dim_;
    std::vector<std::size_t> slot_dims_;
    MultipartiteState rho_;
    std::vector<MultipartiteState> marginals_;
    SpectralDecomposition rho_spectrum_;
    std::vector<SupportProjector> marginal_support_;
    std::vector<ComplexMatrix> marginal_log_;  ///< log2 on the support, 0 elsewhere
};

struct ScanMode {
    enum class Kind { exhaustive, sampled };
    Kind kind = Kind::exhaustive;
    std::size_t count = 0;
    std::uint64_t seed = 0;

    static ScanMode exhaustive() { return {Kind::exhaustive, 0, 0}; }
    static ScanMode sampled(std::size_t count, std::uint64_t seed) { return {Kind::sampled, count, seed}; }
};

struct MatchingVerdict {
    PartyMatching matching;
    bool contained = false;
    double residual = 0.0;
};

struct MatchingScanReport {
    std::size_t n = 0;
    ScanMode mode;
    JRoute route = JRoute::dense;
    std::size_t total = 0;
    std::size_t failing = 0;
    double min_residual = 0.0;
    double max_residual = 0.0;
    std::optional<MatchingVerdict> example_failing;
    std::optional<MatchingVerdict> example_passing;
    /// Narrow reading: whole-factor reorderings only (n! of them).
    std::size_t factor_order_total = 0;
    std::size_t factor_order_failing = 0;
    std::vector<MatchingVerdict> verdicts;
};

/// Tests support containment of rho^{(x)(n-1)} in pi sigma pi^-1 for every
/// matching pi in the scan. Exhaustive mode throws BudgetExceededError when
/// (n(n-1))! exceeds tol.exhaustive_budget.
MatchingScanReport scan_matchings(const MultipartiteState& rho, const ScanMode& mode,
                                  const Tolerances& tol = default_tolerances(),
                                  JRoute route = JRoute::automatic);

/// Containment verdicts for an explicit list of matchings, sharing one
/// diagonalization of sigma across the list.
std::vector<MatchingVerdict> evaluate_matchings(const MultipartiteState& rho,
                                                const std::vector<PartyMatching>& matchings,
                                                const Tolerances& tol = default_tolerances(),
                                                JRoute route = JRoute::automatic);

/// Containment verdict for one matching, via the requested route.
MatchingVerdict evaluate_matching(const JSpace& space, const PartyMatching& m, JRoute route,
                                  const Tolerances& tol = default_tolerances());

}  // namespace dualcorr
