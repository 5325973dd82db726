#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hamdual/cli.hpp"

namespace hc = hamdual::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "hamdual");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = hc::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

}  // namespace

TEST(Cli, ConstantsDefaultGrid) {
    const Result r = run({"constants"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 38u);
    EXPECT_EQ(ls[0], "alpha,s_alpha,lower,upper,bounds_apply,ok");
    EXPECT_EQ(ls[1].rfind("2,", 0), 0u);
}

TEST(Cli, ConstantsSingleAlphaJson) {
    const Result r = run({"constants", "--alpha", "4", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(lines(r.out).at(0));
    EXPECT_EQ(j["alpha"], 4.0);
    EXPECT_NEAR(j["s_alpha"].get<double>(), 0.74196378430272586, 1e-12);
    EXPECT_EQ(j["ok"], true);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"bogus"}).code, 1);
    EXPECT_EQ(run({"verify"}).code, 1);
    EXPECT_EQ(run({"verify", "nothing"}).code, 1);
    EXPECT_EQ(run({"constants", "--format", "xml"}).code, 1);
    EXPECT_EQ(run({"constants", "--alpha", "3", "--alpha-min", "2"}).code, 1);
    EXPECT_EQ(run({"constants", "--alpha-min", "2"}).code, 1);
    EXPECT_EQ(run({"verify", "bellman", "--alpha", "1.5"}).code, 1);
    EXPECT_EQ(run({"verify", "cube", "--p", "3"}).code, 1);
    EXPECT_EQ(run({"sigma", "--n", "5"}).code, 1);
    EXPECT_EQ(run({"verify", "ma", "--tol", "0"}).code, 1);
    EXPECT_EQ(run({"verify", "ma", "--workers", "0"}).code, 1);
    EXPECT_EQ(run({"constants", "--alpha-min", "2", "--alpha-max", "3", "--alpha-step", "-1"}).code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, ViolationExitCode) {
    // A tolerance below rounding level turns solver noise into violations.
    const Result r = run({"verify", "p32", "--samples", "10", "--tol", "1e-300"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("p32.minimax"), std::string::npos);
}

TEST(Cli, VerifyMaCsvColumns) {
    const Result r = run({"verify", "ma", "--samples", "10"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "check,params,worst_gap,tol,n_checked,n_violations,worst_check,worst_location");
}

TEST(Cli, TimingAddsColumn) {
    const Result r = run({"verify", "ma", "--samples", "5", "--timing"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(lines(r.out).at(0).find(",wall_time"), std::string::npos);
}

TEST(Cli, OutputIndependentOfWorkers) {
    const std::vector<std::string> base{"verify", "cube", "--samples", "300", "--seed", "7"};
    auto with = [&](const char* w) {
        auto a = base;
        a.push_back("--workers");
        a.push_back(w);
        return run(a);
    };
    const Result one = with("1"), three = with("3");
    EXPECT_EQ(one.code, 0);
    EXPECT_EQ(one.out, three.out);
}

TEST(Cli, SeedChangesSamples) {
    const Result a = run({"verify", "dyadic", "--depth", "4", "--samples", "50", "--seed", "1", "--workers", "1"});
    const Result b = run({"verify", "dyadic", "--depth", "4", "--samples", "50", "--seed", "2", "--workers", "1"});
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(b.code, 0) << b.out;
    EXPECT_NE(a.out, b.out);
}

TEST(Cli, ToolWorkersEnvironment) {
    ::setenv("TOOL_WORKERS", "banana", 1);
    EXPECT_EQ(run({"verify", "ma", "--samples", "2"}).code, 1);
    ::setenv("TOOL_WORKERS", "2", 1);
    const Result env = run({"verify", "p32", "--samples", "20"});
    ::unsetenv("TOOL_WORKERS");
    const Result flag = run({"verify", "p32", "--samples", "20", "--workers", "1"});
    EXPECT_EQ(env.code, 0);
    EXPECT_EQ(env.out, flag.out);
}

TEST(Cli, PoincareTable) {
    const Result r = run({"poincare-table", "--p-grid", "1.5,2"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0].rfind("p,p_conj,", 0), 0u);
}

TEST(Cli, SigmaTable) {
    const Result r = run({"sigma", "--n", "2", "--p-grid", "1,2"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "n,p,sigma,lower_bound,argmin,ok");
}

TEST(Format, Numbers) {
    EXPECT_EQ(hc::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(hc::format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(hc::format_double(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(hc::format_param(0.1), "0.1");
    EXPECT_EQ(hc::format_param(2.0), "2");
}

TEST(Format, Grid) {
    const auto g = hc::make_grid(2.0, 3.0, 0.5);
    EXPECT_EQ(g, (std::vector<double>{2.0, 2.5, 3.0}));
    EXPECT_EQ(hc::make_grid(1.01, 1.99, 0.01).size(), 99u);
    EXPECT_THROW(hc::make_grid(3.0, 2.0, 0.5), std::invalid_argument);
}

TEST(Format, CsvAndJsonTables) {
    hc::Table t{{"name", "x", "k", "flag"}, {{std::string("a,b"), 1.5, std::int64_t{3}, true}}};
    std::ostringstream csv, json;
    hc::write_table(csv, t, hc::Format::Csv);
    hc::write_table(json, t, hc::Format::Json);
    EXPECT_EQ(csv.str(), "name,x,k,flag\n\"a,b\",1.5,3,true\n");
    const auto j = nlohmann::json::parse(json.str());
    EXPECT_EQ(j["name"], "a,b");
    EXPECT_EQ(j["x"], 1.5);
    EXPECT_EQ(j["k"], 3);
    EXPECT_EQ(j["flag"], true);
}

TEST(SigmaBound, Pieces) {
    EXPECT_EQ(hc::sigma_lower_bound(3.0), 1.0);
    EXPECT_EQ(hc::sigma_lower_bound(0.5), 0.0);
    EXPECT_NEAR(hc::sigma_lower_bound(1.0), std::sqrt(2.0 / 3.14159265358979323846), 1e-15);
    EXPECT_NEAR(hc::sigma_lower_bound(2.0), 1.0, 1e-12);
}
