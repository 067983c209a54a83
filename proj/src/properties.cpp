#include "dualcorr/properties.hpp"

#include <algorithm>

#include "dualcorr/channels.hpp"
#include "dualcorr/entropy.hpp"
#include "dualcorr/rng.hpp"
#include "dualcorr/states.hpp"

namespace dualcorr::properties {

std::string to_string(Suite s) {
    switch (s) {
        case Suite::nonneg: return "nonneg";
        case Suite::local_mono: return "local-mono";
        case Suite::klein: return "klein";
        case Suite::data_processing: return "data-processing";
        case Suite::ptrace_mono: return "ptrace-mono";
    }
    return "nonneg";
}

Suite suite_from_string(const std::string& s) {
    for (Suite x : {Suite::nonneg, Suite::local_mono, Suite::klein, Suite::data_processing, Suite::ptrace_mono})
        if (to_string(x) == s) return x;
    throw ValidationError("unknown suite '" + s + "' (nonneg, local-mono, klein, data-processing, ptrace-mono)");
}

bool report_only(Suite s) { return s == Suite::ptrace_mono; }

double default_tolerance(Suite s) {
    return (s == Suite::nonneg || s == Suite::klein) ? 1e-9 : 1e-8;
}

namespace {

Ensemble pick_ensemble(Rng& rng) { return rng.index(2) == 0 ? Ensemble::hilbert_schmidt : Ensemble::pure_haar; }

MultipartiteState draw_state(const std::vector<std::size_t>& dims, Rng& rng) {
    return random_state({dims, rng.index(UINT64_MAX), pick_ensemble(rng)});
}

// Random channel on a qubit: mostly Stinespring-random, every fourth draw a
// named channel with a random parameter.
KrausChannel draw_qubit_channel(Rng& rng, std::string& label) {
    const auto kind = rng.index(4);
    const double x = rng.uniform();
    switch (kind) {
        case 0: {
            const auto which = rng.index(3);
            if (which == 0) {
                label = "depolarizing:" + std::to_string(x);
                return depolarizing(x);
            }
            if (which == 1) {
                label = "dephasing:" + std::to_string(x);
                return dephasing(x);
            }
            label = "amplitude-damping:" + std::to_string(x);
            return amplitude_damping(x);
        }
        default: {
            const std::size_t count = 1 + rng.index(4);
            const std::uint64_t seed = rng.index(UINT64_MAX);
            label = "random(kraus=" + std::to_string(count) + ",seed=" + std::to_string(seed) + ")";
            return random_channel(2, count, seed);
        }
    }
}

std::vector<std::size_t> qubits(std::size_t n) { return std::vector<std::size_t>(n, 2); }

}  // namespace

TrialRecord run_trial(Suite suite, std::size_t n, std::uint64_t trial_seed, const Tolerances& tol) {
    Rng rng(trial_seed);
    TrialRecord rec;
    rec.trial_seed = trial_seed;
    switch (suite) {
        case Suite::nonneg: {
            auto rho = draw_state(qubits(n), rng);
            rec.lhs = 0.0;
            rec.rhs = dual_total_correlation(rho, tol).value;
            rec.description = "I_" + std::to_string(n) + "(rho) >= 0";
            rec.inputs.push_back(std::move(rho));
            break;
        }
        case Suite::local_mono: {
            auto rho = random_state({qubits(n), rng.index(UINT64_MAX), Ensemble::hilbert_schmidt});
            std::string label;
            const auto ch = draw_qubit_channel(rng, label);
            const std::size_t party = rng.index(n);
            auto out = apply_local(rho, ch, party);
            rec.lhs = dual_total_correlation(out, tol).value;
            rec.rhs = dual_total_correlation(rho, tol).value;
            rec.description = "I_n(" + label + " on party " + std::to_string(party) + ") <= I_n(rho)";
            rec.inputs.push_back(std::move(rho));
            rec.inputs.push_back(std::move(out));
            break;
        }
        case Suite::klein: {
            static const std::vector<std::vector<std::size_t>> shapes{{2}, {3}, {2, 2}, {2, 3}};
            const auto& dims = shapes[rng.index(shapes.size())];
            auto tau = draw_state(dims, rng);
            auto sigma = random_state({dims, rng.index(UINT64_MAX), Ensemble::hilbert_schmidt});
            const auto re = relative_entropy(tau, sigma, tol);
            rec.lhs = 0.0;
            if (re.infinite) rec.skipped = true;
            else rec.rhs = re.raw;
            rec.description = "S(tau||sigma) >= 0";
            rec.inputs.push_back(std::move(tau));
            rec.inputs.push_back(std::move(sigma));
            break;
        }
        case Suite::data_processing: {
            const std::vector<std::size_t> dims{2, 2};
            auto tau = draw_state(dims, rng);
            auto sigma = random_state({dims, rng.index(UINT64_MAX), Ensemble::hilbert_schmidt});
            std::string label;
            const auto ch = draw_qubit_channel(rng, label);
            const std::size_t party = rng.index(2);
            const auto before = relative_entropy(tau, sigma, tol);
            const auto after = relative_entropy(apply_local(tau, ch, party), apply_local(sigma, ch, party), tol);
            if (before.infinite || after.infinite) {
                rec.skipped = true;
            } else {
                rec.lhs = after.raw;
                rec.rhs = before.raw;
            }
            rec.description = "S(L tau||L sigma) <= S(tau||sigma), L = " + label + " on party " + std::to_string(party);
            rec.inputs.push_back(std::move(tau));
            rec.inputs.push_back(std::move(sigma));
            break;
        }
        case Suite::ptrace_mono: {
            if (n < 3) throw ValidationError("ptrace-mono needs n >= 3");
            auto rho = draw_state(qubits(n), rng);
            rec.rhs = dual_total_correlation(rho, tol).value;
            rec.lhs = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k)
                rec.lhs = std::max(rec.lhs, dual_total_correlation(partial_trace(rho, {k}), tol).value);
            rec.description = "max_k I_{n-1}(tr_k rho) vs I_n(rho)";
            rec.inputs.push_back(std::move(rho));
            break;
        }
    }
    rec.margin = rec.rhs - rec.lhs;
    return rec;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
    if (cfg.trials < 1) throw ValidationError("need at least one trial");
    if (cfg.n < 2) throw ValidationError("need at least 2 parties");
    SuiteResult res;
    res.suite = cfg.suite;
    res.tolerance = cfg.tolerance > 0.0 ? cfg.tolerance : default_tolerance(cfg.suite);
    bool first = true;
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        auto rec = run_trial(cfg.suite, cfg.n, mix_seed(cfg.seed, i), cfg.tol);
        rec.index = i;
        ++res.trials;
        if (cfg.suite == Suite::ptrace_mono) {
            // Per-party comparison, report only.
            const auto& rho = rec.inputs.front();
            for (std::size_t k = 0; k < cfg.n; ++k) {
                const double reduced = dual_total_correlation(partial_trace(rho, {k}), cfg.tol).value;
                (reduced <= rec.rhs + res.tolerance ? res.ptrace_le : res.ptrace_gt)++;
            }
            ++res.passed;
            continue;
        }
        if (rec.skipped) {
            ++res.skipped;
            continue;
        }
        if (first || rec.margin < res.worst_margin) res.worst_margin = rec.margin;
        first = false;
        if (rec.margin < -res.tolerance) {
            ++res.failed;
            res.failures.push_back(std::move(rec));
        } else {
            if (rec.margin < 0.0) ++res.near_violations;
            ++res.passed;
        }
    }
    return res;
}

}  // namespace dualcorr::properties
