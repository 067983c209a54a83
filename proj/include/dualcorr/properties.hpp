#pragma once

// Seeded property suites for the correlation measures.
//
// Trial i of a suite draws everything it needs from Rng(mix_seed(root, i)), so
// a failing trial replays from its trial seed alone (run_trial).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualcorr/state.hpp"

namespace dualcorr::properties {

enum class Suite { nonneg, local_mono, klein, data_processing, ptrace_mono };

std::string to_string(Suite s);
Suite suite_from_string(const std::string& s);

/// Report-only suites never count failures.
bool report_only(Suite s);

struct SuiteConfig {
    Suite suite = Suite::nonneg;
    std::size_t trials = 100;
    std::size_t n = 2;  ///< party count (qubits) where the suite uses one
    std::uint64_t seed = 0;
    double tolerance = 0.0;  ///< 0 picks the suite default (1e-9 nonneg/klein, 1e-8 otherwise)
    Tolerances tol = default_tolerances();
};

double default_tolerance(Suite s);

/// Everything needed to look at a trial again.
struct TrialRecord {
    std::size_t index = 0;
    std::uint64_t trial_seed = 0;
    std::string description;
    /// Asserted inequality as lhs <= rhs + tolerance; margin = rhs - lhs.
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool skipped = false;  ///< e.g. an infinite relative entropy on one side
    std::vector<MultipartiteState> inputs;
};

struct SuiteResult {
    Suite suite = Suite::nonneg;
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    std::size_t near_violations = 0;  ///< margin in [-tolerance, 0)
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::vector<TrialRecord> failures;
    /// ptrace-mono only: counts of I_{n-1}(tr_k rho) <= I_n(rho) vs >.
    std::size_t ptrace_le = 0;
    std::size_t ptrace_gt = 0;

    bool ok() const { return failed == 0; }
};

/// One trial, reconstructed from its trial seed.
TrialRecord run_trial(Suite suite, std::size_t n, std::uint64_t trial_seed,
                      const Tolerances& tol = default_tolerances());

SuiteResult run_suite(const SuiteConfig& cfg);

}  // namespace dualcorr::properties
