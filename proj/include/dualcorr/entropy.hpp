#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualcorr/matching.hpp"
#include "dualcorr/state.hpp"
#include "dualcorr/support.hpp"

namespace dualcorr {

/// Why a relative entropy came out infinite.
struct Divergence {
    double residual_mass = 0.0;  ///< tr((I - P_sigma) tau)
    long violating_rank = -1;    ///< rank of tau compressed onto ker(sigma); -1 if not computed
};

/// Nonnegative real in bits, or +infinity with a divergence witness.
struct ExtendedValue {
    bool infinite = false;
    double value = 0.0;  ///< reported value; clipped to 0 when raw is in [-clip, 0)
    double raw = 0.0;    ///< unclipped numeric value
    std::optional<Divergence> divergence;

    static ExtendedValue finite(double raw, double clip = default_tolerances().clip);
    static ExtendedValue infinity(Divergence d);

    bool is_finite() const { return !infinite; }
    bool clipped() const { return !infinite && value != raw; }
};

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

/// -sum lambda log2 lambda over eigenvalues above tol.eig_cutoff.
double von_neumann_entropy(const MultipartiteState& s, const Tolerances& tol = default_tolerances());
double von_neumann_entropy(std::span<const double> eigenvalues, double cutoff);

/// S(tau || sigma) in bits. Infinite unless tr((I - P_sigma) tau) <= tol.support.
ExtendedValue relative_entropy(const MultipartiteState& tau, const MultipartiteState& sigma,
                               const Tolerances& tol = default_tolerances());

/// relative_entropy plus the two traces it was assembled from (zero when infinite).
struct RelativeEntropyParts {
    ExtendedValue value;
    double tau_log_tau = 0.0;    ///< tr(tau log2 tau)
    double tau_log_sigma = 0.0;  ///< tr(tau log2 sigma), log restricted to supp(sigma)
};

RelativeEntropyParts relative_entropy_parts(const MultipartiteState& tau, const MultipartiteState& sigma,
                                            const Tolerances& tol = default_tolerances());

struct DualTotalCorrelation {
    double value = 0.0;
    double joint_entropy = 0.0;                ///< S(rho)
    std::vector<double> marginal_entropies;   ///< S(tr_k rho), k = 0..n-1
};

/// I_n(rho) = sum_k S(tr_k rho) - (n-1) S(rho).
DualTotalCorrelation dual_total_correlation(const MultipartiteState& s,
                                            const Tolerances& tol = default_tolerances());

struct JnEvaluation {
    ExtendedValue value;
    JRoute route = JRoute::dense;
    PartyMatching matching;
    double tau_log_tau = 0.0;    ///< tr(tau log2 tau); set when finite
    double tau_log_sigma = 0.0;  ///< tr(tau log2 sigma_matched); set when finite
};

/// J_n(rho) = S(rho^{(x)(n-1)} || pi ((x)_k tr_k rho) pi^-1) for the given matching.
/// Requires equal local dimensions (UnsupportedConfigError otherwise) and a
/// register dimension within tol.max_dim (SizeLimitError otherwise).
JnEvaluation evaluate_j_n(const MultipartiteState& s, const PartyMatching& matching,
                          const Tolerances& tol = default_tolerances(), JRoute route = JRoute::automatic);

ExtendedValue j_n(const MultipartiteState& s, const PartyMatching& matching,
                  const Tolerances& tol = default_tolerances(), JRoute route = JRoute::automatic);

/// A measure result with its per-term breakdown.
struct MeasureReport {
    std::string measure;
    std::string input;
    ExtendedValue result;
    std::vector<std::pair<std::string, double>> breakdown;

    /// Recombines the breakdown into the measure value (finite results only).
    double recombined() const;
};

MeasureReport report_dtc(const MultipartiteState& s, std::string input,
                         const Tolerances& tol = default_tolerances());
MeasureReport report_jn(const MultipartiteState& s, const PartyMatching& m, std::string input,
                        const Tolerances& tol = default_tolerances(), JRoute route = JRoute::automatic);

}  // namespace dualcorr
