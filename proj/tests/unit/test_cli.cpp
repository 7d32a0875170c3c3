#include "polybloch/cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using polybloch::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "polybloch");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json parsed(const Outcome& o) { return nlohmann::json::parse(o.out); }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "polybloch_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(Cli, AnalyzeIdentity) {
    const Outcome o = invoke({"analyze", "--phi", "z1;z2", "--psi", "z1;z2", "--samples", "5000"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = parsed(o);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["verdict"], "Compact");
    EXPECT_EQ(j["lower_bound"], 0.0);
    EXPECT_EQ(j["upper_bound"], 0.0);
    EXPECT_EQ(j["boundedness_assumed"], true);
    EXPECT_TRUE(j["runtime_ms"].is_null());
    EXPECT_EQ(j["config"]["phi"], "z1;z2");
    EXPECT_EQ(j["rows"].size(), 6U);
    for (const auto& key : {"delta", "S", "K", "b_l", "samples_in_region", "witness_S", "witness_K"}) {
        EXPECT_TRUE(j["rows"][0].contains(key)) << key;
    }
}

TEST(Cli, AnalyzeContractionsDegenerate) {
    const Outcome o = invoke({"analyze", "--phi", "scale(0.5,z1);scale(0.5,z2)", "--psi",
                              "scale(0.333,z1);scale(0.333,z2)", "--samples", "5000"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = parsed(o);
    EXPECT_EQ(j["verdict"], "Compact");
    EXPECT_EQ(j["diagnostics"]["degenerate_empty"], true);
}

TEST(Cli, AnalyzeSquareIsNotCompact) {
    const Outcome o = invoke({"analyze", "--phi", "z1;z2", "--psi", "pow(z1,2);z2", "--samples", "20000"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = parsed(o);
    EXPECT_EQ(j["verdict"], "NotCompact");
    EXPECT_GE(j["lower_bound"].get<double>(), 0.24);
}

TEST(Cli, ParseErrorExitsOneWithPosition) {
    const Outcome o = invoke({"analyze", "--phi", "z1 + ; z2", "--psi", "z1;z2"});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("offset 5"), std::string::npos) << o.err;
    EXPECT_TRUE(o.out.empty());
}

TEST(Cli, EscapingMapExitsTwoWithWitness) {
    const Outcome o = invoke({"analyze", "--phi", "z1 + 0.5; z2", "--psi", "z1;z2", "--samples", "5000"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("not a self-map"), std::string::npos);
    EXPECT_NE(o.err.find(" at ("), std::string::npos);
}

TEST(Cli, UnwritableOutputExitsThree) {
    const Outcome o = invoke({"analyze", "--phi", "z1", "--psi", "z1", "--dim", "1", "--samples", "1000", "--out",
                              "/nonexistent-dir/report.json"});
    EXPECT_EQ(o.code, 3);
}

TEST(Cli, InvalidConfigurationExitsOne) {
    EXPECT_EQ(invoke({"analyze", "--phi", "z1", "--psi", "z1", "--dim", "1", "--samples", "999"}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--phi", "z1", "--psi", "z1", "--dim", "1", "--delta-ladder", "0.1,0.2"}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--phi", "z1", "--psi", "z1", "--dim", "1", "--format", "xml"}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--phi", "z1", "--dim", "1"}).code, 1);
}

TEST(Cli, CsvRows) {
    const Outcome o = invoke({"analyze", "--phi", "z1;z2", "--psi", "pow(z1,2);z2", "--samples", "2000",
                              "--delta-ladder", "0.2,0.1", "--format", "csv"});
    ASSERT_EQ(o.code, 0) << o.err;
    std::istringstream lines(o.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "delta,S,K,samples_in_region,b_1,b_2");
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 2);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
    const std::vector<std::string> base{"analyze", "--phi", "mob(0.3,z1); z1*z2", "--psi", "pow(z2,2); 0.9*z1",
                                        "--samples", "20000", "--seed", "17"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto four = base;
    four.insert(four.end(), {"--threads", "4"});
    const Outcome a = invoke(one);
    const Outcome b = invoke(four);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SeedFromEnvironment) {
    const std::vector<std::string> args{"bloch", "--f", "pow(z1,3)*z2", "--samples", "2000"};
    ::setenv("POLYBLOCH_SEED", "42", 1);
    const Outcome env = invoke(args);
    ::unsetenv("POLYBLOCH_SEED");
    auto explicit_args = args;
    explicit_args.insert(explicit_args.end(), {"--seed", "42"});
    const Outcome flag = invoke(explicit_args);
    ASSERT_EQ(env.code, 0);
    EXPECT_EQ(env.out, flag.out);
    EXPECT_EQ(parsed(env)["config"]["seed"], 42);
}

TEST(Cli, JobFileWithOverrides) {
    const fs::path job = scratch("job.json");
    {
        std::ofstream f(job);
        f << R"({"dim": 2, "phi": "z1;z2", "psi": "pow(z1,2);z2", "samples": 3000, "delta_ladder": [0.3, 0.1]})";
    }
    const Outcome o = invoke({"analyze", "--job", job.string(), "--samples", "4000"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = parsed(o);
    EXPECT_EQ(j["config"]["samples"], 4000);
    EXPECT_EQ(j["rows"].size(), 2U);
    EXPECT_EQ(invoke({"analyze", "--job", (scratch("missing.json")).string()}).code, 3);
}

TEST(Cli, OutputFile) {
    const fs::path out = scratch("report.json");
    fs::remove(out);
    const Outcome o = invoke({"bloch", "--f", "z1", "--samples", "2000", "--out", out.string()});
    ASSERT_EQ(o.code, 0);
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    EXPECT_NEAR(j["seminorm_B"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, BlochExamples) {
    const auto c = parsed(invoke({"bloch", "--f", "0.5", "--samples", "2000"}));
    EXPECT_EQ(c["seminorm_B"], 0.0);
    EXPECT_EQ(c["norm_1"], 0.5);
    EXPECT_EQ(invoke({"bloch", "--f", "z1 *"}).code, 1);
}

TEST(Cli, VerifySuites) {
    const Outcome ok = invoke({"verify", "--suite", "lemma1", "--trials", "200"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    const auto j = parsed(ok);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(j["reports"].size(), 3U);
    EXPECT_EQ(invoke({"verify", "--suite", "nonsense"}).code, 1);
    EXPECT_EQ(invoke({"verify", "--suite", "fm", "--trials", "2000"}).code, 0);
}

TEST(Cli, RecordRuntimeIsOptIn) {
    const auto j = parsed(invoke({"bloch", "--f", "z1", "--samples", "1000", "--record-runtime"}));
    EXPECT_TRUE(j["runtime_ms"].is_number());
}

TEST(Cli, UnknownFlagIsRejected) { EXPECT_NE(invoke({"analyze", "--bogus"}).code, 0); }
