#include "dualcorr/entropy.hpp"

#include <cmath>
#include <limits>

#include "dualcorr/kernels.hpp"

namespace dualcorr {

ExtendedValue ExtendedValue::finite(double raw, double clip) {
    ExtendedValue v;
    v.raw = raw;
    v.value = (raw < 0.0 && raw >= -clip) ? 0.0 : raw;
    return v;
}

ExtendedValue ExtendedValue::infinity(Divergence d) {
    ExtendedValue v;
    v.infinite = true;
    v.value = v.raw = std::numeric_limits<double>::infinity();
    v.divergence = d;
    return v;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary_entropy: p must lie in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double von_neumann_entropy(std::span<const double> eigenvalues, double cutoff) {
    double s = 0.0;
    for (double l : eigenvalues)
        if (l > cutoff) s -= l * std::log2(l);
    return s;
}

double von_neumann_entropy(const MultipartiteState& s, const Tolerances& tol) {
    const auto sd = eig_hermitian(s.matrix());
    s.validate_spectrum(sd.values, tol);
    return von_neumann_entropy(sd.values, tol.eig_cutoff);
}

RelativeEntropyParts relative_entropy_parts(const MultipartiteState& tau, const MultipartiteState& sigma,
                                            const Tolerances& tol) {
    if (tau.dim() != sigma.dim())
        throw ValidationError("relative_entropy: dimensions " + std::to_string(tau.dim()) + " and " +
                              std::to_string(sigma.dim()) + " differ");
    const std::size_t d = tau.dim();
    const auto sd_sigma = eig_hermitian(sigma.matrix());
    sigma.validate_spectrum(sd_sigma.values, tol);

    // <v_j| tau |v_j> for every eigenvector of sigma
    std::vector<double> overlap(d);
    std::vector<std::vector<cplx>> vecs(d);
    for (std::size_t j = 0; j < d; ++j) {
        vecs[j] = sd_sigma.vector(j);
        const auto tv = matvec(tau.matrix(), vecs[j]);
        overlap[j] = kernels::dotc(vecs[j].data(), tv.data(), d).real();
    }

    double inside = 0.0;
    std::vector<std::size_t> kernel;
    for (std::size_t j = 0; j < d; ++j) {
        if (sd_sigma.values[j] > tol.eig_cutoff)
            inside += overlap[j];
        else
            kernel.push_back(j);
    }
    const double residual = tau.matrix().trace().real() - inside;
    if (residual > tol.support) {
        Divergence div{residual, -1};
        if (kernel.size() <= 512) {
            ComplexMatrix compressed(kernel.size());
            for (std::size_t a = 0; a < kernel.size(); ++a) {
                const auto tv = matvec(tau.matrix(), vecs[kernel[a]]);
                for (std::size_t b = 0; b < kernel.size(); ++b)
                    compressed(b, a) = kernels::dotc(vecs[kernel[b]].data(), tv.data(), d);
            }
            const auto sd = eig_hermitian(compressed, {.hermiticity_tol = 1e-8});
            long rank = 0;
            for (double l : sd.values)
                if (l > tol.eig_cutoff) ++rank;
            div.violating_rank = rank;
        }
        return {ExtendedValue::infinity(div), 0.0, 0.0};
    }

    const auto sd_tau = eig_hermitian(tau.matrix());
    tau.validate_spectrum(sd_tau.values, tol);
    double tau_log_tau = 0.0;
    for (double l : sd_tau.values)
        if (l > tol.eig_cutoff) tau_log_tau += l * std::log2(l);
    double tau_log_sigma = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        if (sd_sigma.values[j] > tol.eig_cutoff) tau_log_sigma += overlap[j] * std::log2(sd_sigma.values[j]);
    return {ExtendedValue::finite(tau_log_tau - tau_log_sigma, tol.clip), tau_log_tau, tau_log_sigma};
}

ExtendedValue relative_entropy(const MultipartiteState& tau, const MultipartiteState& sigma, const Tolerances& tol) {
    return relative_entropy_parts(tau, sigma, tol).value;
}

DualTotalCorrelation dual_total_correlation(const MultipartiteState& s, const Tolerances& tol) {
    const std::size_t n = s.parties();
    if (n < 2) throw ValidationError("dual_total_correlation: need at least 2 parties");
    DualTotalCorrelation out;
    out.joint_entropy = von_neumann_entropy(s, tol);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.marginal_entropies.push_back(von_neumann_entropy(partial_trace(s, {k}), tol));
        sum += out.marginal_entropies.back();
    }
    out.value = sum - static_cast<double>(n - 1) * out.joint_entropy;
    return out;
}

JnEvaluation evaluate_j_n(const MultipartiteState& s, const PartyMatching& matching, const Tolerances& tol,
                          JRoute route) {
    const JSpace space(s, tol);
    JnEvaluation out;
    out.matching = matching;
    out.route = space.resolve(route);

    if (out.route == JRoute::dense) {
        const auto tau = space.tau_dense();
        const auto sigma = space.sigma_matched_dense(matching);
        const auto parts = relative_entropy_parts(tau, sigma, tol);
        out.value = parts.value;
        out.tau_log_tau = parts.tau_log_tau;
        out.tau_log_sigma = parts.tau_log_sigma;
        return out;
    }

    const double residual = space.residual_factored(matching);
    if (residual > tol.support) {
        out.value = ExtendedValue::infinity({residual, -1});
        return out;
    }
    out.tau_log_tau = space.tau_log_tau_factored();
    out.tau_log_sigma = space.tau_log_sigma_factored(matching);
    out.value = ExtendedValue::finite(out.tau_log_tau - out.tau_log_sigma, tol.clip);
    return out;
}

ExtendedValue j_n(const MultipartiteState& s, const PartyMatching& matching, const Tolerances& tol, JRoute route) {
    return evaluate_j_n(s, matching, tol, route).value;
}

double MeasureReport::recombined() const {
    if (measure == "dtc") {
        // breakdown: S(rho_k) for each k, then S(rho) and the (n-1) factor
        double sum = 0.0, joint = 0.0, factor = 0.0;
        for (const auto& [name, v] : breakdown) {
            if (name.starts_with("S(rho_not_")) sum += v;
            else if (name == "S(rho)") joint = v;
            else if (name == "n_minus_1") factor = v;
        }
        return sum - factor * joint;
    }
    double tlt = 0.0, tls = 0.0;
    for (const auto& [name, v] : breakdown) {
        if (name == "tr(tau log tau)") tlt = v;
        else if (name == "tr(tau log sigma)") tls = v;
    }
    return tlt - tls;
}

MeasureReport report_dtc(const MultipartiteState& s, std::string input, const Tolerances& tol) {
    const auto dtc = dual_total_correlation(s, tol);
    MeasureReport r{"dtc", std::move(input), ExtendedValue::finite(dtc.value, tol.clip), {}};
    for (std::size_t k = 0; k < dtc.marginal_entropies.size(); ++k)
        r.breakdown.emplace_back("S(rho_not_" + std::to_string(k) + ")", dtc.marginal_entropies[k]);
    r.breakdown.emplace_back("S(rho)", dtc.joint_entropy);
    r.breakdown.emplace_back("n_minus_1", static_cast<double>(s.parties() - 1));
    return r;
}

MeasureReport report_jn(const MultipartiteState& s, const PartyMatching& m, std::string input,
                        const Tolerances& tol, JRoute route) {
    const auto ev = evaluate_j_n(s, m, tol, route);
    MeasureReport r{"jn", std::move(input), ev.value, {}};
    if (ev.value.is_finite()) {
        r.breakdown.emplace_back("tr(tau log tau)", ev.tau_log_tau);
        r.breakdown.emplace_back("tr(tau log sigma)", ev.tau_log_sigma);
    }
    return r;
}

}  // namespace dualcorr
