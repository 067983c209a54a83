#pragma once
// Command-line front end: configuration, parsing and the four commands.
//
// Exit codes are a fixed contract:
//   0  success
//   1  a property or dense/exact agreement check failed
//   2  usage or validation error

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dualcorr/errors.hpp"

namespace dualcorr::cli {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

/// Malformed command line.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string tool_version();

struct StateSpec {
    std::string kind = "ghz";  ///< ghz | orthogonal-product | random
    std::size_t n = 3;
    double p = 0.5;                     ///< ghz
    std::size_t d = 0;                  ///< orthogonal-product local dimension; 0 means d = n
    std::vector<std::size_t> dims;      ///< random; empty means n qubits
    std::string ensemble = "hilbert-schmidt";

    friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

struct RunConfig {
    std::string command;  ///< compute | counterexample | sweep | proptest
    StateSpec state;
    std::string measure = "dtc";        ///< dtc | jn
    std::string matching = "canonical";
    std::string route = "automatic";    ///< automatic | dense | factored
    std::string format = "json";        ///< json | csv | table
    std::uint64_t seed = 0;
    std::string seed_source = "default";  ///< flag | env | default
    bool timestamp = true;

    // counterexample
    bool exhaustive = false;
    std::size_t samples = 500;

    // sweep
    double p_start = 0.0;
    double p_stop = 1.0;
    double p_step = 0.1;

    // proptest
    std::string suite = "all";
    std::size_t trials = 100;
    std::optional<std::uint64_t> replay_seed;

    double tol_eig = default_tolerances().eig_cutoff;
    double tol_support = default_tolerances().support;
    std::size_t max_dim = default_tolerances().max_dim;

    Tolerances tolerances() const;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// JSON text of a config (the "config" block of every report).
std::string config_to_json(const RunConfig& cfg);
/// Inverse of config_to_json. Throws ValidationError on malformed input.
RunConfig config_from_json(const std::string& text);

/// Parse argv (argv[0] is the program name). `env_seed` stands in for the
/// DUALCORR_SEED environment variable. Throws UsageError on bad flags and
/// ValidationError on bad values. Returns nullopt when --help or --version
/// was handled (text written to `out`).
std::optional<RunConfig> parse_args(int argc, const char* const* argv, const char* env_seed, std::ostream& out);

/// Run one parsed command; the report goes to `out`, logs to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run with exceptions mapped to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dualcorr::cli
