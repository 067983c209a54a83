#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualcorr {

/// Malformed input: non-Hermitian operator, bad party index, p outside [0,1], ...
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation would build an operator above the configured dimension cap.
class SizeLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Inputs are well formed but outside what the routine supports
/// (e.g. J_n on parties of unequal local dimension).
class UnsupportedConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration was requested past the permutation budget.
class BudgetExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric tolerances and size caps shared by every module.
///
/// The defaults are the values the test suites are pinned against; the CLI
/// exposes `--tol-eig`, `--tol-support` and `--max-dim` to override them.
struct Tolerances {
    double hermiticity = 1e-10;   ///< max |A_ij - conj(A_ji)|
    double trace = 1e-10;         ///< |tr(rho) - 1|
    double psd = 1e-10;           ///< smallest admissible eigenvalue is -psd
    double eig_cutoff = 1e-10;    ///< eigenvalues at or below are treated as zero
    double support = 1e-9;        ///< containment holds iff residual mass <= support
    double clip = 1e-9;           ///< finite results in [-clip, 0) report as 0
    std::size_t max_dim = 8192;   ///< cap on any dense operator dimension
    std::size_t exhaustive_budget = 10000;
    std::size_t dense_route_limit = 1024;  ///< above this, J_n and scans use the factored route
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace dualcorr
