#include <charconv>
#include <ostream>

#include "CLI11.hpp"
#include "dualcorr/cli.hpp"
#include "json.hpp"

namespace dualcorr::cli {

using nlohmann::json;

std::string tool_version() { return DUALCORR_VERSION; }

Tolerances RunConfig::tolerances() const {
    Tolerances t;
    t.eig_cutoff = tol_eig;
    t.support = tol_support;
    t.max_dim = max_dim;
    return t;
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["state"] = {{"kind", c.state.kind},         {"n", c.state.n}, {"p", c.state.p}, {"d", c.state.d},
                  {"dims", c.state.dims},         {"ensemble", c.state.ensemble}};
    j["measure"] = c.measure;
    j["matching"] = c.matching;
    j["route"] = c.route;
    j["format"] = c.format;
    j["seed"] = c.seed;
    j["seed_source"] = c.seed_source;
    j["timestamp"] = c.timestamp;
    j["exhaustive"] = c.exhaustive;
    j["samples"] = c.samples;
    j["p_start"] = c.p_start;
    j["p_stop"] = c.p_stop;
    j["p_step"] = c.p_step;
    j["suite"] = c.suite;
    j["trials"] = c.trials;
    j["replay_seed"] = c.replay_seed ? json(*c.replay_seed) : json(nullptr);
    j["tol_eig"] = c.tol_eig;
    j["tol_support"] = c.tol_support;
    j["max_dim"] = c.max_dim;
    return j.dump();
}

RunConfig config_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        const json& s = j.at("state");
        c.state.kind = s.at("kind").get<std::string>();
        c.state.n = s.at("n").get<std::size_t>();
        c.state.p = s.at("p").get<double>();
        c.state.d = s.at("d").get<std::size_t>();
        c.state.dims = s.at("dims").get<std::vector<std::size_t>>();
        c.state.ensemble = s.at("ensemble").get<std::string>();
        c.measure = j.at("measure").get<std::string>();
        c.matching = j.at("matching").get<std::string>();
        c.route = j.at("route").get<std::string>();
        c.format = j.at("format").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.seed_source = j.at("seed_source").get<std::string>();
        c.timestamp = j.at("timestamp").get<bool>();
        c.exhaustive = j.at("exhaustive").get<bool>();
        c.samples = j.at("samples").get<std::size_t>();
        c.p_start = j.at("p_start").get<double>();
        c.p_stop = j.at("p_stop").get<double>();
        c.p_step = j.at("p_step").get<double>();
        c.suite = j.at("suite").get<std::string>();
        c.trials = j.at("trials").get<std::size_t>();
        if (!j.at("replay_seed").is_null()) c.replay_seed = j.at("replay_seed").get<std::uint64_t>();
        c.tol_eig = j.at("tol_eig").get<double>();
        c.tol_support = j.at("tol_support").get<double>();
        c.max_dim = j.at("max_dim").get<std::size_t>();
        return c;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config JSON: ") + e.what());
    }
}

namespace {

std::uint64_t parse_seed(const std::string& text, const char* what) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ValidationError(std::string(what) + " must be an unsigned 64-bit integer, got '" + text + "'");
    return v;
}

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
}

void check_config(const RunConfig& c) {
    const auto& s = c.state;
    if (s.kind != "ghz" && s.kind != "orthogonal-product" && s.kind != "random")
        throw ValidationError("--state must be ghz, orthogonal-product or random");
    if (s.n < 2) throw ValidationError("--n must be at least 2");
    check_unit_interval(s.p, "--p");
    if (s.ensemble != "pure-haar" && s.ensemble != "hilbert-schmidt")
        throw ValidationError("--ensemble must be pure-haar or hilbert-schmidt");
    if (c.measure != "dtc" && c.measure != "jn") throw ValidationError("--measure must be dtc or jn");
    if (c.route != "automatic" && c.route != "dense" && c.route != "factored")
        throw ValidationError("--route must be automatic, dense or factored");
    if (c.format != "json" && c.format != "csv" && c.format != "table")
        throw ValidationError("--format must be json, csv or table");
    if (!(c.tol_eig > 0.0)) throw ValidationError("--tol-eig must be positive");
    if (!(c.tol_support > 0.0)) throw ValidationError("--tol-support must be positive");
    if (c.max_dim < 1) throw ValidationError("--max-dim must be positive");
    if (c.samples < 1) throw ValidationError("--samples must be at least 1");
    if (c.trials < 1) throw ValidationError("--trials must be at least 1");
    check_unit_interval(c.p_start, "--p-start");
    check_unit_interval(c.p_stop, "--p-stop");
    if (!(c.p_step > 0.0)) throw ValidationError("--p-step must be positive");
    if (c.p_stop < c.p_start) throw ValidationError("--p-stop must not be below --p-start");
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, const char* env_seed, std::ostream& out) {
    RunConfig c;
    std::string seed_text;
    std::string replay_text;

    CLI::App app{"Dual total correlation and the relative-entropy form J_n for multipartite states", "dualcorr"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "json | csv | table")->capture_default_str();
        sub->add_option("--seed", seed_text, "root seed (falls back to DUALCORR_SEED, then 0)");
        sub->add_option("--tol-eig", c.tol_eig, "zero-eigenvalue cutoff")->capture_default_str();
        sub->add_option("--tol-support", c.tol_support, "support containment tolerance")->capture_default_str();
        sub->add_option("--max-dim", c.max_dim, "largest dense operator dimension")->capture_default_str();
        sub->add_flag("--no-timestamp", "omit the generated_at field");
    };
    auto party_count = [&](CLI::App* sub) { return sub->add_option("--n", c.state.n, "number of parties"); };

    auto* compute = app.add_subcommand("compute", "evaluate I_n (dtc) or J_n (jn) on one state");
    common(compute);
    auto* compute_n = party_count(compute);
    compute->add_option("--state", c.state.kind, "ghz | orthogonal-product | random")->capture_default_str();
    compute->add_option("--p", c.state.p, "GHZ weight of |0...0>")->capture_default_str();
    compute->add_option("--d", c.state.d, "local dimension for orthogonal-product (default n)");
    auto* dims_opt = compute->add_option("--dims", c.state.dims, "local dimensions for random, e.g. 2,2,3")
                         ->delimiter(',');
    compute->add_option("--ensemble", c.state.ensemble, "pure-haar | hilbert-schmidt")->capture_default_str();
    compute->add_option("--measure", c.measure, "dtc | jn")->capture_default_str();
    compute->add_option("--matching", c.matching, "canonical | swap | party-aligned | comma-separated slot list")
        ->capture_default_str();
    compute->add_option("--route", c.route, "automatic | dense | factored")->capture_default_str();

    auto* counter = app.add_subcommand("counterexample", "scan matchings of ghz(n, p) and run the exact oracle");
    common(counter);
    party_count(counter);
    counter->add_option("--p", c.state.p, "GHZ weight of |0...0>")->capture_default_str();
    counter->add_flag("--exhaustive", c.exhaustive, "enumerate every matching");
    counter->add_option("--samples", c.samples, "matchings to sample when not exhaustive")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "I_n of ghz(n, p) over a p-grid against n h(p)");
    common(sweep);
    party_count(sweep);
    sweep->add_option("--p-start", c.p_start)->capture_default_str();
    sweep->add_option("--p-stop", c.p_stop)->capture_default_str();
    sweep->add_option("--p-step", c.p_step)->capture_default_str();

    auto* prop = app.add_subcommand("proptest", "seeded property suites");
    common(prop);
    auto* prop_n = party_count(prop);
    prop->add_option("--suite", c.suite, "all | nonneg | local-mono | klein | data-processing | ptrace-mono")
        ->capture_default_str();
    prop->add_option("--trials", c.trials)->capture_default_str();
    prop->add_option("--replay-seed", replay_text, "rerun the single trial with this trial seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << "\n";
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    c.command = chosen->get_name();
    c.timestamp = chosen->count("--no-timestamp") == 0;

    if (!seed_text.empty()) {
        c.seed = parse_seed(seed_text, "--seed");
        c.seed_source = "flag";
    } else if (env_seed != nullptr && *env_seed != '\0') {
        c.seed = parse_seed(env_seed, "DUALCORR_SEED");
        c.seed_source = "env";
    }
    if (!replay_text.empty()) c.replay_seed = parse_seed(replay_text, "--replay-seed");

    if (c.command == "compute") {
        if (dims_opt->count() > 0) {
            if (c.state.kind != "random") throw ValidationError("--dims only applies to --state random");
            if (compute_n->count() > 0 && c.state.n != c.state.dims.size())
                throw ValidationError("--n disagrees with the number of --dims entries");
            c.state.n = c.state.dims.size();
        }
    } else {
        c.state.kind = "ghz";
    }
    if (c.command == "proptest" && prop_n->count() == 0) c.state.n = c.suite == "ptrace-mono" ? 3 : 2;

    check_config(c);
    return c;
}

}  // namespace dualcorr::cli
