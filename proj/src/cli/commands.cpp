#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <sstream>

#include "dualcorr/cli.hpp"
#include "dualcorr/entropy.hpp"
#include "dualcorr/kernels.hpp"
#include "dualcorr/oracle.hpp"
#include "dualcorr/properties.hpp"
#include "dualcorr/states.hpp"
#include "dualcorr/support.hpp"
#include "json.hpp"

namespace dualcorr::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kSweepTol = 1e-9;

// Shortest round-trip decimal, '.' separator regardless of locale.
std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

JRoute route_from(const std::string& s) {
    if (s == "dense") return JRoute::dense;
    if (s == "factored") return JRoute::factored;
    return JRoute::automatic;
}

std::string describe_state(const StateSpec& s) {
    std::ostringstream os;
    if (s.kind == "ghz") {
        os << "ghz n=" << s.n << " p=" << num(s.p);
    } else if (s.kind == "orthogonal-product") {
        os << "orthogonal-product n=" << s.n << " d=" << (s.d ? s.d : s.n);
    } else {
        os << "random dims=";
        const auto dims = s.dims.empty() ? std::vector<std::size_t>(s.n, 2) : s.dims;
        for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "x" : "") << dims[i];
        os << " ensemble=" << s.ensemble;
    }
    return os.str();
}

MultipartiteState build_state(const RunConfig& c) {
    const auto& s = c.state;
    if (s.kind == "ghz") return ghz({s.n, s.p});
    if (s.kind == "orthogonal-product") return orthogonal_product(s.n, s.d ? s.d : s.n);
    RandomSpec spec;
    spec.party_dims = s.dims.empty() ? std::vector<std::size_t>(s.n, 2) : s.dims;
    spec.seed = c.seed;
    spec.ensemble = ensemble_from_string(s.ensemble);
    return random_state(spec);
}

ordered_json tolerances_json(const Tolerances& t) {
    return {{"hermiticity", t.hermiticity},
            {"trace", t.trace},
            {"psd", t.psd},
            {"eig_cutoff", t.eig_cutoff},
            {"support", t.support},
            {"clip", t.clip},
            {"max_dim", t.max_dim},
            {"exhaustive_budget", t.exhaustive_budget},
            {"dense_route_limit", t.dense_route_limit}};
}

ordered_json slot_labels_json(std::size_t n) {
    const SlotLayout l{n};
    return {{"tau", l.tau_labels()}, {"sigma", l.sigma_labels()}};
}

ordered_json matching_json(const PartyMatching& m) {
    return {{"kind", m.kind_name()}, {"perm", m.perm}, {"description", m.describe()}};
}

ordered_json envelope(const RunConfig& c) {
    ordered_json j;
    j["tool"] = {{"name", "dualcorr"}, {"version", tool_version()}, {"kernels", std::string(kernels::backend_name())}};
    j["command"] = c.command;
    j["config"] = ordered_json::parse(config_to_json(c));
    j["tolerances"] = tolerances_json(c.tolerances());
    if (c.timestamp) j["generated_at"] = utc_now();
    return j;
}

void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

// key/value rows for --format table
void emit_table(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << "\n";
}

void emit_csv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

// ---------------------------------------------------------------- compute

int cmd_compute(const RunConfig& c, std::ostream& out) {
    const Tolerances tol = c.tolerances();
    const auto rho = build_state(c);
    const std::string input = describe_state(c.state);

    MeasureReport report;
    std::optional<PartyMatching> matching;
    std::string route;
    if (c.measure == "dtc") {
        report = report_dtc(rho, input, tol);
    } else {
        matching = parse_matching(c.matching, rho.parties());
        const auto ev = evaluate_j_n(rho, *matching, tol, route_from(c.route));
        route = to_string(ev.route);
        report = report_jn(rho, *matching, input, tol, ev.route);
    }
    const auto& r = report.result;

    if (c.format == "json") {
        auto j = envelope(c);
        if (matching) j["slot_labels"] = slot_labels_json(rho.parties());
        ordered_json res;
        res["measure"] = report.measure;
        res["input"] = report.input;
        res["value"] = r.infinite ? ordered_json("infinite") : ordered_json(r.value);
        res["raw"] = r.infinite ? ordered_json(nullptr) : ordered_json(r.raw);
        res["clipped"] = r.clipped();
        ordered_json diag;
        ordered_json breakdown = ordered_json::object();
        for (const auto& [k, v] : report.breakdown) breakdown[k] = v;
        diag["breakdown"] = breakdown;
        if (r.infinite) {
            diag["residual_mass"] = r.divergence->residual_mass;
            diag["violating_rank"] = r.divergence->violating_rank;
        }
        if (matching) {
            diag["route"] = route;
            diag["matching"] = matching_json(*matching);
        }
        res["diagnostics"] = diag;
        j["result"] = res;
        j["status"] = "ok";
        emit_json(out, j);
    } else {
        const std::string value = r.infinite ? "infinite" : num(r.value);
        const std::string raw = r.infinite ? "" : num(r.raw);
        const std::string residual = r.infinite ? num(r.divergence->residual_mass) : "";
        if (c.format == "csv") {
            emit_csv(out, {"measure", "input", "value", "raw", "residual_mass"},
                     {{report.measure, report.input, value, raw, residual}});
        } else {
            std::vector<std::pair<std::string, std::string>> rows{
                {"measure", report.measure}, {"input", report.input}, {"value", value}};
            if (r.infinite) {
                rows.emplace_back("residual_mass", residual);
                rows.emplace_back("violating_rank", std::to_string(r.divergence->violating_rank));
            } else {
                rows.emplace_back("raw", raw);
            }
            for (const auto& [k, v] : report.breakdown) rows.emplace_back(k, num(v));
            if (matching) {
                rows.emplace_back("route", route);
                rows.emplace_back("matching", matching->describe());
            }
            emit_table(out, rows);
        }
    }
    return exit_ok;
}

// --------------------------------------------------------- counterexample

ordered_json verdict_json(const MatchingVerdict& v) {
    return {{"perm", v.matching.perm}, {"contained", v.contained}, {"residual", v.residual}};
}

int cmd_counterexample(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Tolerances tol = c.tolerances();
    const std::size_t n = c.state.n;
    const double p = c.state.p;
    const auto branches = oracle::branches_for(p);
    const auto all = oracle::containment_verdict_all(n, branches);

    // Dense or factored scan where the register fits; the exact oracle alone beyond.
    std::string mode;
    std::optional<MatchingScanReport> scan;
    std::optional<oracle::AgreementReport> agreement;
    if (n <= 4) {
        const auto rho = ghz({n, p});
        const bool exhaustive = c.exhaustive || n <= 3;
        const ScanMode sm = exhaustive ? ScanMode::exhaustive() : ScanMode::sampled(c.samples, c.seed);
        mode = exhaustive ? "exhaustive" : "sampled";
        scan = scan_matchings(rho, sm, tol, route_from(c.route));
        agreement = oracle::compare_with_scan(n, p, *scan);
    } else {
        mode = "oracle-only";
        err << "counterexample: n=" << n << " register has 2^" << n * (n - 1)
            << " dimensions; numeric scan skipped, exact oracle only\n";
    }
    const bool agree = !agreement || agreement->all_agree();
    if (!agree) err << agreement->dump();

    std::string verdict;
    if (all.contained)
        verdict = "some matching satisfies the support condition; J_n can be finite";
    else
        verdict = "no matching satisfies the support condition; J_n is infinite under every matching";

    const int code = agree ? exit_ok : exit_check_failed;
    if (c.format == "json") {
        auto j = envelope(c);
        j["slot_labels"] = slot_labels_json(n);
        ordered_json res;
        res["n"] = n;
        res["p"] = p;
        res["mode"] = mode;
        if (scan) {
            ordered_json s;
            s["route"] = to_string(scan->route);
            s["total"] = scan->total;
            s["failing"] = scan->failing;
            s["passing"] = scan->total - scan->failing;
            s["min_residual"] = scan->min_residual;
            s["max_residual"] = scan->max_residual;
            s["factor_order_total"] = scan->factor_order_total;
            s["factor_order_failing"] = scan->factor_order_failing;
            s["example_failing"] = scan->example_failing ? verdict_json(*scan->example_failing) : ordered_json(nullptr);
            s["example_passing"] = scan->example_passing ? verdict_json(*scan->example_passing) : ordered_json(nullptr);
            res["scan"] = s;
        } else {
            res["scan"] = nullptr;
        }
        const std::size_t width = n * (n - 1);
        res["oracle"] = {{"contained_for_some_matching", all.contained},
                         {"method", all.method},
                         {"witness", all.witness ? ordered_json(oracle::to_bitstring(*all.witness, width))
                                                 : ordered_json(nullptr)},
                         {"tau_weights", oracle::tau_weights(n)},
                         {"sigma_weights", oracle::sigma_weights(n)},
                         {"shared_weights", oracle::shared_weights(n)}};
        if (agreement) {
            ordered_json dis = ordered_json::array();
            for (const auto& d : agreement->disagreements)
                dis.push_back({{"perm", d.matching.perm},
                               {"dense_contained", d.dense_contained},
                               {"dense_residual", d.dense_residual},
                               {"exact_contained", d.exact_contained}});
            res["agreement"] = {{"checked", agreement->total},
                                {"agreed", agreement->agreed},
                                {"ok", agreement->all_agree()},
                                {"disagreements", dis}};
        } else {
            res["agreement"] = nullptr;
        }
        res["verdict"] = verdict;
        j["result"] = res;
        j["status"] = agree ? "ok" : "check-failed";
        emit_json(out, j);
    } else {
        const std::string total = scan ? std::to_string(scan->total) : "";
        const std::string failing = scan ? std::to_string(scan->failing) : "";
        const std::string min_res = scan ? num(scan->min_residual) : "";
        const std::string agreement_text = agreement ? (agree ? "ok" : "FAILED") : "n/a";
        if (c.format == "csv") {
            emit_csv(out, {"n", "p", "mode", "total", "failing", "min_residual", "oracle_contained_for_some", "agreement"},
                     {{std::to_string(n), num(p), mode, total, failing, min_res, all.contained ? "true" : "false",
                       agreement_text}});
        } else {
            std::vector<std::pair<std::string, std::string>> rows{{"n", std::to_string(n)}, {"p", num(p)}, {"mode", mode}};
            if (scan) {
                rows.emplace_back("route", to_string(scan->route));
                rows.emplace_back("matchings", total);
                rows.emplace_back("failing", failing);
                rows.emplace_back("min_residual", min_res);
                rows.emplace_back("factor_order", std::to_string(scan->factor_order_failing) + "/" +
                                                      std::to_string(scan->factor_order_total) + " failing");
                if (scan->example_passing) rows.emplace_back("example_passing", scan->example_passing->matching.describe());
                if (scan->example_failing) rows.emplace_back("example_failing", scan->example_failing->matching.describe());
            }
            rows.emplace_back("oracle", all.contained ? "contained for some matching" : "contained for no matching");
            if (all.witness) rows.emplace_back("witness", oracle::to_bitstring(*all.witness, n * (n - 1)));
            rows.emplace_back("agreement", agreement_text);
            rows.emplace_back("verdict", verdict);
            emit_table(out, rows);
        }
    }
    return code;
}

// ------------------------------------------------------------------ sweep

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const Tolerances tol = c.tolerances();
    const std::size_t n = c.state.n;
    const auto count = static_cast<std::size_t>(std::floor((c.p_stop - c.p_start) / c.p_step + 1e-9)) + 1;
    struct Row {
        double p, numeric, analytic, diff;
    };
    std::vector<Row> rows;
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        // Snap to 12 decimals so 0.1*3 prints as 0.3.
        const double p = std::min(c.p_stop, std::round((c.p_start + i * c.p_step) * 1e12) / 1e12);
        const double numeric = dual_total_correlation(ghz({n, p}), tol).value;
        const double analytic = static_cast<double>(n) * binary_entropy(p);
        rows.push_back({p, numeric, analytic, std::abs(numeric - analytic)});
        worst = std::max(worst, rows.back().diff);
    }
    const bool ok = worst <= kSweepTol;
    if (c.format == "json") {
        auto j = envelope(c);
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows)
            arr.push_back({{"p", r.p}, {"numeric", r.numeric}, {"analytic", r.analytic}, {"abs_diff", r.diff}});
        j["result"] = {{"n", n}, {"rows", arr}, {"max_abs_diff", worst}, {"diff_tolerance", kSweepTol}, {"ok", ok}};
        j["status"] = ok ? "ok" : "check-failed";
        emit_json(out, j);
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows) cells.push_back({num(r.p), num(r.numeric), num(r.analytic), num(r.diff)});
        if (c.format == "csv") {
            emit_csv(out, {"p", "numeric", "analytic", "abs_diff"}, cells);
        } else {
            out << "p             numeric               analytic              abs_diff\n";
            for (const auto& r : cells) {
                for (std::size_t k = 0; k < r.size(); ++k) {
                    out << r[k];
                    if (k + 1 < r.size()) out << std::string(r[k].size() < 22 ? 22 - r[k].size() : 1, ' ');
                }
                out << "\n";
            }
            out << "max abs_diff " << num(worst) << (ok ? " (ok)" : " (exceeds tolerance)") << "\n";
        }
    }
    return ok ? exit_ok : exit_check_failed;
}

// --------------------------------------------------------------- proptest

ordered_json state_json(const MultipartiteState& s) {
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        ordered_json rr = ordered_json::array(), ii = ordered_json::array();
        for (std::size_t j = 0; j < s.dim(); ++j) {
            rr.push_back(s.matrix()(i, j).real());
            ii.push_back(s.matrix()(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return {{"party_dims", s.party_dims()}, {"real", re}, {"imag", im}};
}

std::string replay_command(properties::Suite s, std::size_t n, std::uint64_t trial_seed) {
    return "dualcorr proptest --suite " + properties::to_string(s) + " --n " + std::to_string(n) +
           " --replay-seed " + std::to_string(trial_seed);
}

ordered_json trial_json(const properties::TrialRecord& r, properties::Suite s, std::size_t n) {
    ordered_json inputs = ordered_json::array();
    for (const auto& st : r.inputs) inputs.push_back(state_json(st));
    return {{"index", r.index},   {"trial_seed", r.trial_seed}, {"description", r.description},
            {"lhs", r.lhs},       {"rhs", r.rhs},               {"margin", r.margin},
            {"skipped", r.skipped}, {"replay", replay_command(s, n, r.trial_seed)}, {"inputs", inputs}};
}

int cmd_proptest(const RunConfig& c, std::ostream& out, std::ostream& err) {
    using namespace dualcorr::properties;
    const Tolerances tol = c.tolerances();
    const std::size_t n = c.state.n;

    if (c.replay_seed) {
        if (c.suite == "all") throw ValidationError("--replay-seed needs a single --suite");
        const Suite s = suite_from_string(c.suite);
        auto rec = run_trial(s, n, *c.replay_seed, tol);
        const double t = default_tolerance(s);
        const bool failed = !report_only(s) && !rec.skipped && rec.margin < -t;
        if (c.format == "json") {
            auto j = envelope(c);
            j["result"] = {{"replay", trial_json(rec, s, n)}, {"tolerance", t}, {"failed", failed}};
            j["status"] = failed ? "check-failed" : "ok";
            emit_json(out, j);
        } else {
            emit_table(out, {{"suite", c.suite},
                             {"trial_seed", std::to_string(rec.trial_seed)},
                             {"description", rec.description},
                             {"lhs", num(rec.lhs)},
                             {"rhs", num(rec.rhs)},
                             {"margin", num(rec.margin)},
                             {"result", rec.skipped ? "skipped" : (failed ? "FAILED" : "pass")}});
        }
        return failed ? exit_check_failed : exit_ok;
    }

    std::vector<Suite> suites;
    if (c.suite == "all")
        suites = {Suite::nonneg, Suite::local_mono, Suite::klein, Suite::data_processing};
    else
        suites = {suite_from_string(c.suite)};

    std::vector<SuiteResult> results;
    bool any_failed = false;
    for (Suite s : suites) {
        SuiteConfig cfg;
        cfg.suite = s;
        cfg.trials = c.trials;
        cfg.n = n;
        cfg.seed = c.seed;
        cfg.tol = tol;
        results.push_back(run_suite(cfg));
        const auto& r = results.back();
        if (!r.ok()) {
            any_failed = true;
            for (const auto& f : r.failures)
                err << "proptest " << to_string(s) << ": trial " << f.index << " failed (margin " << num(f.margin)
                    << "); replay with: " << replay_command(s, n, f.trial_seed) << "\n";
        }
        if (r.near_violations)
            err << "proptest " << to_string(s) << ": " << r.near_violations << " near-violations within tolerance\n";
    }

    if (c.format == "json") {
        auto j = envelope(c);
        ordered_json arr = ordered_json::array();
        for (const auto& r : results) {
            ordered_json fails = ordered_json::array();
            for (const auto& f : r.failures) fails.push_back(trial_json(f, r.suite, n));
            ordered_json e{{"suite", to_string(r.suite)},
                           {"n", n},
                           {"report_only", report_only(r.suite)},
                           {"trials", r.trials},
                           {"passed", r.passed},
                           {"failed", r.failed},
                           {"skipped", r.skipped},
                           {"near_violations", r.near_violations},
                           {"worst_margin", r.worst_margin},
                           {"tolerance", r.tolerance},
                           {"failures", fails}};
            if (r.suite == Suite::ptrace_mono)
                e["ptrace"] = {{"reduced_le_full", r.ptrace_le}, {"reduced_gt_full", r.ptrace_gt}};
            arr.push_back(e);
        }
        j["result"] = {{"suites", arr}, {"ok", !any_failed}};
        j["status"] = any_failed ? "check-failed" : "ok";
        emit_json(out, j);
    } else if (c.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : results)
            rows.push_back({to_string(r.suite), std::to_string(n), std::to_string(r.trials), std::to_string(r.passed),
                            std::to_string(r.failed), std::to_string(r.skipped), std::to_string(r.near_violations),
                            num(r.worst_margin), num(r.tolerance)});
        emit_csv(out, {"suite", "n", "trials", "passed", "failed", "skipped", "near_violations", "worst_margin", "tolerance"},
                 rows);
    } else {
        for (const auto& r : results) {
            std::vector<std::pair<std::string, std::string>> rows{
                {"suite", to_string(r.suite) + (report_only(r.suite) ? " (report only)" : "")},
                {"trials", std::to_string(r.trials)},
                {"passed", std::to_string(r.passed)},
                {"failed", std::to_string(r.failed)},
                {"skipped", std::to_string(r.skipped)},
                {"near_violations", std::to_string(r.near_violations)},
                {"worst_margin", num(r.worst_margin)}};
            if (r.suite == Suite::ptrace_mono) {
                rows.emplace_back("I_{n-1}(tr_k rho) <= I_n(rho)", std::to_string(r.ptrace_le));
                rows.emplace_back("I_{n-1}(tr_k rho) >  I_n(rho)", std::to_string(r.ptrace_gt));
            }
            emit_table(out, rows);
            out << "\n";
        }
    }
    return any_failed ? exit_check_failed : exit_ok;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.command == "compute") return cmd_compute(c, out);
    if (c.command == "counterexample") return cmd_counterexample(c, out, err);
    if (c.command == "sweep") return cmd_sweep(c, out);
    if (c.command == "proptest") return cmd_proptest(c, out, err);
    throw UsageError("unknown command '" + c.command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_args(argc, argv, std::getenv("DUALCORR_SEED"), out);
        if (!cfg) return exit_ok;
        return run(*cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n(run with --help for the flag list)\n";
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
    } catch (const SizeLimitError& e) {
        err << "size limit: " << e.what() << "\n";
    } catch (const UnsupportedConfigError& e) {
        err << "unsupported configuration: " << e.what() << "\n";
    } catch (const BudgetExceededError& e) {
        err << "budget exceeded: " << e.what() << "\n";
    }
    return exit_usage;
}

}  // namespace dualcorr::cli
