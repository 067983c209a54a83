#include "doctest.h"

#include <sstream>

#include "dualcorr/cli.hpp"
#include "json.hpp"

using namespace dualcorr;
using namespace dualcorr::cli;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "dualcorr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json report(std::vector<std::string> args, int expected_code = exit_ok) {
    args.push_back("--no-timestamp");
    const auto o = invoke(std::move(args));
    REQUIRE_MESSAGE(o.code == expected_code, o.err);
    return json::parse(o.out);
}

RunConfig parsed(std::vector<std::string> args, const char* env_seed = nullptr) {
    args.insert(args.begin(), "dualcorr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    auto c = parse_args(static_cast<int>(argv.size()), argv.data(), env_seed, out);
    REQUIRE(c.has_value());
    return *c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round-trips through JSON") {
    RunConfig c = parsed({"compute", "--state", "random", "--dims", "2,3,2", "--ensemble", "pure-haar", "--seed", "18446744073709551615",
                          "--tol-eig", "1e-12", "--max-dim", "512", "--format", "csv"});
    CHECK(config_from_json(config_to_json(c)) == c);
    c = parsed({"proptest", "--suite", "klein", "--replay-seed", "99", "--trials", "5"});
    CHECK(c.replay_seed == std::optional<std::uint64_t>(99));
    CHECK(config_from_json(config_to_json(c)) == c);
    c = parsed({"sweep", "--n", "5", "--p-start", "0.25", "--p-stop", "0.75", "--p-step", "0.05", "--no-timestamp"});
    CHECK_FALSE(c.timestamp);
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK_THROWS_AS(config_from_json("{\"command\": \"compute\"}"), ValidationError);
    CHECK_THROWS_AS(config_from_json("not json"), ValidationError);
}

TEST_CASE("seed precedence: flag, then DUALCORR_SEED, then 0") {
    CHECK(parsed({"compute"}).seed == 0);
    CHECK(parsed({"compute"}).seed_source == "default");
    CHECK(parsed({"compute"}, "41").seed == 41);
    CHECK(parsed({"compute"}, "41").seed_source == "env");
    CHECK(parsed({"compute", "--seed", "5"}, "41").seed == 5);
    CHECK(parsed({"compute", "--seed", "5"}, "41").seed_source == "flag");
    CHECK(invoke({"compute", "--seed", "-1"}).code == exit_usage);
}

TEST_CASE("compute: ghz n = 3 dual total correlation is 3 bits") {
    const auto j = report({"compute", "--state", "ghz", "--n", "3", "--p", "0.5", "--measure", "dtc"});
    CHECK(j["result"]["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(j["result"]["diagnostics"]["breakdown"]["S(rho)"].get<double>() == doctest::Approx(0.0));
    CHECK(j["tool"]["version"] == tool_version());
    CHECK(j["config"]["state"]["n"] == 3);
    CHECK(j["tolerances"]["eig_cutoff"].get<double>() == 1e-10);
}

TEST_CASE("compute: ghz n = 3 J_n is infinite with a positive residual") {
    const auto j = report({"compute", "--state", "ghz", "--n", "3", "--p", "0.5", "--measure", "jn", "--matching", "canonical"});
    CHECK(j["result"]["value"] == "infinite");
    CHECK(j["result"]["raw"].is_null());
    CHECK(j["result"]["diagnostics"]["residual_mass"].get<double>() > 0.0);
    CHECK(j["slot_labels"]["tau"].size() == 6);
}

TEST_CASE("compute: orthogonal product has zero dual total correlation") {
    const auto j = report({"compute", "--state", "orthogonal-product", "--n", "3", "--d", "3", "--measure", "dtc"});
    CHECK(std::abs(j["result"]["value"].get<double>()) <= 1e-9);
}

TEST_CASE("compute: csv and table formats") {
    auto o = invoke({"compute", "--format", "csv"});
    CHECK(o.code == exit_ok);
    CHECK(o.out.rfind("measure,input,value,raw,residual_mass\n", 0) == 0);
    CHECK(o.out.find("dtc,ghz n=3 p=0.5,3,3,") != std::string::npos);
    o = invoke({"compute", "--measure", "jn", "--format", "table"});
    CHECK(o.code == exit_ok);
    CHECK(o.out.find("infinite") != std::string::npos);
    CHECK(o.out.find("residual_mass") != std::string::npos);
}

TEST_CASE("counterexample: all 720 matchings fail at n = 3") {
    const auto j = report({"counterexample", "--n", "3", "--p", "0.5", "--exhaustive"});
    const auto& r = j["result"];
    CHECK(r["mode"] == "exhaustive");
    CHECK(r["scan"]["total"] == 720);
    CHECK(r["scan"]["failing"] == 720);
    CHECK(r["oracle"]["contained_for_some_matching"] == false);
    CHECK(r["agreement"]["ok"] == true);
    CHECK(r["agreement"]["checked"] == 720);
}

TEST_CASE("counterexample: n = 2 has a passing matching") {
    const auto j = report({"counterexample", "--n", "2", "--p", "0.3"});
    const auto& r = j["result"];
    CHECK(r["scan"]["total"] == 2);
    CHECK(r["scan"]["passing"].get<int>() >= 1);
    CHECK_FALSE(r["scan"]["example_passing"].is_null());
    CHECK(r["oracle"]["contained_for_some_matching"] == true);
    CHECK(r["agreement"]["ok"] == true);
}

TEST_CASE("counterexample: n = 4 is sampled on the factored route") {
    const auto j = report({"counterexample", "--n", "4", "--samples", "20", "--seed", "3"});
    CHECK(j["result"]["mode"] == "sampled");
    CHECK(j["result"]["scan"]["route"] == "factored");
    CHECK(j["result"]["scan"]["failing"] == 20);
    CHECK(j["result"]["agreement"]["ok"] == true);
    CHECK(invoke({"counterexample", "--n", "4", "--exhaustive"}).code == exit_usage);
}

TEST_CASE("counterexample: n = 6 runs the oracle only") {
    const auto o = invoke({"counterexample", "--n", "6", "--no-timestamp"});
    REQUIRE(o.code == exit_ok);
    CHECK(o.err.find("oracle only") != std::string::npos);
    const auto j = json::parse(o.out);
    CHECK(j["result"]["mode"] == "oracle-only");
    CHECK(j["result"]["scan"].is_null());
    CHECK(j["result"]["oracle"]["contained_for_some_matching"] == false);
    CHECK(j["result"]["oracle"]["witness"].get<std::string>().size() == 30);
}

TEST_CASE("sweep: 11 rows with zero endpoints") {
    const auto j = report({"sweep", "--n", "3"});
    const auto& rows = j["result"]["rows"];
    REQUIRE(rows.size() == 11);
    CHECK(std::abs(rows.front()["numeric"].get<double>()) <= 1e-12);
    CHECK(std::abs(rows.back()["numeric"].get<double>()) <= 1e-12);
    CHECK(j["result"]["max_abs_diff"].get<double>() <= 1e-9);
}

TEST_CASE("sweep: n = 4 at p = 0.5 is 4 bits") {
    const auto o = invoke({"sweep", "--n", "4", "--p-start", "0.5", "--p-stop", "0.5", "--format", "csv"});
    REQUIRE(o.code == exit_ok);
    CHECK(o.out == "p,numeric,analytic,abs_diff\n0.5,4,4,0\n");
}

TEST_CASE("sweep: grid points are snapped") {
    const auto o = invoke({"sweep", "--n", "2", "--p-start", "0.2", "--p-stop", "0.4", "--format", "csv"});
    REQUIRE(o.code == exit_ok);
    CHECK(o.out.find("\n0.3,") != std::string::npos);
}

TEST_CASE("proptest: suites pass and exit 0") {
    auto j = report({"proptest", "--suite", "nonneg", "--trials", "200", "--n", "3", "--seed", "7"});
    CHECK(j["result"]["suites"][0]["passed"] == 200);
    j = report({"proptest", "--suite", "local-mono", "--trials", "100", "--n", "2", "--seed", "7"});
    CHECK(j["result"]["suites"][0]["passed"] == 100);
    j = report({"proptest", "--trials", "10", "--seed", "1"});
    CHECK(j["result"]["suites"].size() == 4);
}

TEST_CASE("proptest: ptrace-mono is report only") {
    const auto j = report({"proptest", "--suite", "ptrace-mono", "--trials", "20"});
    const auto& s = j["result"]["suites"][0];
    CHECK(s["report_only"] == true);
    CHECK(s["n"] == 3);
    CHECK(s["ptrace"]["reduced_le_full"].get<int>() + s["ptrace"]["reduced_gt_full"].get<int>() == 60);
}

TEST_CASE("proptest: replay reproduces one trial") {
    const auto j = report({"proptest", "--suite", "klein", "--replay-seed", "42"});
    CHECK(j["result"]["replay"]["trial_seed"] == 42);
    CHECK(j["result"]["replay"]["replay"] == "dualcorr proptest --suite klein --n 2 --replay-seed 42");
    CHECK(j["result"]["replay"]["inputs"].size() == 2);
    CHECK(invoke({"proptest", "--replay-seed", "42"}).code == exit_usage);
}

TEST_CASE("json output is byte-identical across runs") {
    for (std::vector<std::string> args : {std::vector<std::string>{"compute", "--state", "random", "--dims", "2,2", "--seed", "9"},
                                          {"counterexample", "--n", "4", "--samples", "10", "--seed", "2"},
                                          {"proptest", "--trials", "5", "--seed", "3"}}) {
        args.push_back("--no-timestamp");
        CHECK(invoke(args).out == invoke(args).out);
    }
    const auto stamped = json::parse(invoke({"compute"}).out);
    CHECK(stamped.contains("generated_at"));
}

TEST_CASE("usage and validation errors exit 2") {
    CHECK(invoke({}).code == exit_usage);
    CHECK(invoke({"frobnicate"}).code == exit_usage);
    CHECK(invoke({"compute", "--bogus"}).code == exit_usage);
    CHECK(invoke({"compute", "--p", "1.5"}).code == exit_usage);
    CHECK(invoke({"compute", "--n", "1"}).code == exit_usage);
    CHECK(invoke({"compute", "--format", "xml"}).code == exit_usage);
    CHECK(invoke({"compute", "--measure", "jn", "--matching", "0,0,1,2,3,4"}).code == exit_usage);
    CHECK(invoke({"compute", "--state", "ghz", "--dims", "2,2"}).code == exit_usage);
    CHECK(invoke({"compute", "--state", "random", "--dims", "2,3", "--measure", "jn"}).code == exit_usage);
    CHECK(invoke({"compute", "--n", "14", "--max-dim", "64"}).code == exit_usage);
    CHECK(invoke({"sweep", "--p-start", "0.8", "--p-stop", "0.2"}).code == exit_usage);
    CHECK(invoke({"proptest", "--trials", "0"}).code == exit_usage);
    const auto o = invoke({"compute", "--bogus"});
    CHECK(o.out.empty());
    CHECK_FALSE(o.err.empty());
}

TEST_CASE("help and version exit 0") {
    auto o = invoke({"--help"});
    CHECK(o.code == exit_ok);
    CHECK(o.out.find("counterexample") != std::string::npos);
    o = invoke({"--version"});
    CHECK(o.code == exit_ok);
    CHECK(o.out == tool_version() + "\n");
}

}  // TEST_SUITE
