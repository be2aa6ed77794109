#include "chances/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <sys/wait.h>

namespace cli = chances::cli;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status = cli::dispatch(args, out, err);
    return {status, out.str(), err.str()};
}

// Rebuilds argv from the op name and the echoed inputs.
std::vector<std::string> reinvocation(const Json& doc) {
    const std::string op = doc["op"].get<std::string>();
    const auto dot = op.find('.');
    std::vector<std::string> args{op.substr(0, dot), op.substr(dot + 1)};
    for (const auto& [name, value] : doc["inputs"].items()) {
        if (value.is_boolean()) {
            args.push_back("--" + name);
            continue;
        }
        args.push_back("--" + name);
        if (value.is_array()) {
            std::string joined;
            for (std::size_t i = 0; i < value.size(); ++i) joined += (i ? "," : "") + value[i].get<std::string>();
            args.push_back(joined);
        } else {
            args.push_back(value.get<std::string>());
        }
    }
    return args;
}

const std::string kData = CHANCES_DATA_DIR;

const std::vector<std::vector<std::string>> kInvocations = {
    {"exact", "factorial", "--n", "32"},
    {"exact", "binomial", "--n", "10", "--k", "3"},
    {"exact", "odds", "--p", "28/41"},
    {"exact", "probability", "--for", "28", "--against", "13"},
    {"binom", "exact", "--n", "400", "--c", "1"},
    {"binom", "exact", "--n", "100", "--p", "3/10", "--c", "1"},
    {"binom", "limit", "--c", "2"},
    {"binom", "term", "--n", "100", "--l", "3"},
    {"binom", "remark1", "--n", "14400"},
    {"binom", "sample-size", "--p", "0.5", "--c", "0.05", "--alpha", "0.05"},
    {"binom", "simulate", "--n", "100", "--c", "1", "--reps", "500", "--seed", "7", "--threads", "3"},
    {"duration", "exact", "--b", "3", "--p", "0.3", "--n", "9"},
    {"duration", "closed", "--b", "6", "--p", "0.27", "--n", "40"},
    {"recur", "solve", "--coeffs", "1,1", "--init", "0,1"},
    {"recur", "eval", "--coeffs", "1,1", "--init", "0,1", "--index", "12"},
    {"recur", "sum", "--coeffs", "2", "--init", "1", "--upto", "5"},
    {"factor", "unity", "--n", "5", "--sign", "-1"},
    {"factor", "demoivre-power", "--theta", "0.37", "--n", "17"},
    {"series", "raise", "--coeffs", "1,1/2,1/3", "--power", "3", "--order", "6"},
    {"series", "multinomial", "--degree", "4", "--power", "2"},
    {"series", "revert", "--coeffs", "1,-1", "--order", "6"},
    {"series", "compose", "--f", "0,1", "--g", "1,1", "--order", "4"},
    {"annuity", "table"},
    {"annuity", "table", "--tail100"},
    {"annuity", "survival", "--law", "86", "--x", "50", "--t", "18"},
    {"annuity", "value", "--maty", "--x", "40", "--rate", "0.05"},
    {"annuity", "value", "--table", kData + "/maty_breslau.csv", "--x", "40", "--rate", "0.05"},
    {"annuity", "value", "--maty", "--tail100", "--x", "80", "--rate", "0.03"},
    {"annuity", "law-closed", "--x", "50", "--rate", "0.05"},
    {"annuity", "joint", "--maty", "--x", "40", "--law2", "86", "--y", "30", "--rate", "0.04"},
    {"annuity", "error-table", "--maty", "--ages", "20,50,70", "--rates", "0.03,0.05"},
    {"conic", "focal-product", "--a", "2", "--b", "1", "--theta", "0.5"},
    {"conic", "curvature", "--a", "2", "--b", "1", "--theta", "0"},
    {"conic", "force", "--a", "2", "--b", "1", "--theta", "1"},
    {"conic", "inverse-square", "--a", "3", "--b", "2"},
    {"games", "deck-odds", "--size", "32"},
    {"games", "tour", "--start", "d4"},
    {"games", "validate", "--tour", "a1,b3"},
};

}  // namespace

TEST_CASE("example invocations") {
    auto r = run({"binom", "remark1", "--n", "3600", "--format", "json"});
    REQUIRE(r.status == cli::kExitOk);
    auto doc = Json::parse(r.out);
    CHECK(doc["op"] == "binom.remark1");
    CHECK(doc["result"] == "1/120");

    r = run({"duration", "closed", "--b", "2", "--p", "0.5", "--n", "4"});
    REQUIRE(r.status == cli::kExitOk);
    CHECK(Json::parse(r.out)["result"].get<double>() == 0.25);

    r = run({"annuity", "error-table", "--maty", "--ages", "50", "--rates", "0.05"});
    REQUIRE(r.status == cli::kExitOk);
    doc = Json::parse(r.out);
    const double entry = doc["result"]["percent"][0][0].get<double>();
    CHECK(entry >= 2.5);
    CHECK(entry <= 5.5);
    CHECK(doc["result"].contains("note"));
}

TEST_CASE("document shape") {
    auto r = run({"exact", "odds", "--p", "28/41"});
    REQUIRE(r.status == 0);
    CHECK(r.err.empty());
    auto doc = Json::parse(r.out);
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"op", "inputs", "result", "provenance"});
    CHECK(doc["inputs"]["p"] == "28/41");
    CHECK(r.out.find("28:13") != std::string::npos);

    // Reals carry 17 significant digits.
    r = run({"binom", "limit", "--c", "1"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("0.68268949213708") != std::string::npos);

    r = run({"exact", "binomial", "--n", "100", "--k", "50"});
    CHECK(Json::parse(r.out)["result"] == "100891344545564193334812497256");

    r = run({"--format", "text", "binom", "remark1", "--n", "3600"});
    REQUIRE(r.status == 0);
    CHECK(r.out == "op: binom.remark1\nresult: 1/120\n");
}

TEST_CASE("exit codes") {
    auto usage = [](const std::vector<std::string>& args) {
        auto r = run(args);
        CHECK(r.status == cli::kExitUsage);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    };
    auto domain = [](const std::vector<std::string>& args) {
        auto r = run(args);
        CHECK(r.status == cli::kExitDomain);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    };
    usage({});
    usage({"binom"});
    usage({"binom", "remark1"});
    usage({"binom", "remark1", "--n", "abc"});
    usage({"binom", "nosuch"});
    usage({"binom", "simulate", "--n", "100", "--c", "1", "--reps", "10"});
    usage({"annuity", "value", "--x", "40", "--rate", "0.05"});
    usage({"annuity", "value", "--maty", "--law", "86", "--x", "40", "--rate", "0.05"});
    usage({"annuity", "error-table", "--law", "86", "--ages", "50", "--rates", "0.05"});
    usage({"factor", "unity", "--n", "4", "--sign", "2"});
    usage({"--format", "xml", "binom", "remark1", "--n", "3600"});

    domain({"binom", "remark1", "--n", "3601"});
    domain({"exact", "odds", "--p", "3/2"});
    domain({"recur", "solve", "--coeffs", "2,-1", "--init", "1,2"});
    domain({"annuity", "value", "--table", kData + "/missing.csv", "--x", "40", "--rate", "0.05"});
    domain({"annuity", "value", "--law", "86", "--x", "90", "--rate", "0.05"});
    domain({"conic", "force", "--a", "1", "--b", "2", "--theta", "0"});
    domain({"series", "revert", "--coeffs", "0,1", "--order", "3"});
    domain({"games", "tour", "--start", "z9"});
}

TEST_CASE("every library operation has exactly one command") {
    const std::vector<std::string> operations = {
        "factorial", "binomial_coefficient", "odds_from_probability", "probability_from_odds",
        "exact_central_probability", "limit_central_probability", "demoivre_term", "remark1_fraction",
        "sample_size", "simulate_band", "duration_exceeds_exact", "duration_exceeds_closed",
        "solve_recurrence", "eval_closed_form", "partial_sum", "factor_unity", "demoivre_power",
        "raise_series", "multinomial_coefficient_terms", "revert_series", "compose_series",
        "reconstruct_maty_table", "survival_probability", "annuity_value", "demoivre_annuity_closed",
        "joint_annuity_value", "approximation_error_table", "focal_product", "radius_of_curvature",
        "centripetal_force", "inverse_square_constant", "deck_match_odds", "find_tour", "validate_tour",
    };
    std::map<std::string, int> seen;
    for (const auto& c : cli::command_table()) ++seen[std::string(c.operation)];
    CHECK(seen.size() == operations.size());
    for (const auto& op : operations) CHECK_MESSAGE(seen[op] == 1, op);

    // Every table entry is a live command.
    std::set<std::string> invoked;
    for (const auto& args : kInvocations) invoked.insert(args[0] + "." + args[1]);
    for (const auto& c : cli::command_table()) {
        const std::string op = std::string(c.group) + "." + std::string(c.name);
        CHECK_MESSAGE(invoked.count(op) == 1, op);
        CHECK_FALSE(c.provenance.empty());
    }
}

TEST_CASE("round trip and determinism for every command") {
    for (const auto& args : kInvocations) {
        INFO(args[0] << " " << args[1]);
        auto first = run(args);
        REQUIRE(first.status == cli::kExitOk);
        auto doc = Json::parse(first.out);
        CHECK(run(args).out == first.out);

        auto again = run(reinvocation(doc));
        REQUIRE(again.status == cli::kExitOk);
        CHECK(Json::parse(again.out)["result"] == doc["result"]);
        CHECK(again.out == first.out);

        auto text = run([&] { auto a = args; a.insert(a.begin(), {"--format", "text"}); return a; }());
        CHECK(text.status == cli::kExitOk);
        CHECK(text.out.rfind("op: " + doc["op"].get<std::string>(), 0) == 0);
    }
}

TEST_CASE("installed binary") {
    const std::string command = std::string(CHANCES_CLI_PATH) + " binom remark1 --n 3600";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    std::string output;
    std::array<char, 256> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    const int status = pclose(pipe);
    CHECK(status == 0);
    CHECK(output == run({"binom", "remark1", "--n", "3600"}).out);

    pipe = popen((std::string(CHANCES_CLI_PATH) + " binom remark1 --n 3601 2>/dev/null").c_str(), "r");
    REQUIRE(pipe);
    while (std::fgets(buf.data(), buf.size(), pipe)) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == cli::kExitDomain);
}
