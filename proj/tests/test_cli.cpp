#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spectail/cli.hpp"

namespace fs = std::filesystem;
using spectail::cli::dispatch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "spectail");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, NoArgsIsUsage) {
    const auto r = run({});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownFlagOrSubcommandIsUsage) {
    EXPECT_EQ(run({"psi-norm", "--bogus"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "psi-norm"}).code, 2);
}

TEST(Cli, StochasticCommandsNeedSeed) {
    for (auto cmd : {"sample", "norm", "tail", "chain-verify", "net-verify"}) {
        const auto r = run({cmd, "--n", "4"});
        if (std::string(cmd) == "net-verify") {
            EXPECT_EQ(run({cmd}).code, 2);
        } else {
            EXPECT_EQ(r.code, 2) << cmd;
            EXPECT_NE(r.err.find("--seed"), std::string::npos) << cmd;
        }
    }
}

TEST(Cli, PsiNormLaplace) {
    const auto r = run({"psi-norm", "--family", "laplace", "--scale", "1", "--alpha", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j[0]["psi_norm"].get<double>(), 2.0, 1e-8);
    const auto t = run({"psi-norm", "--family", "laplace", "--scale", "1", "--alpha", "1"});
    EXPECT_NE(t.out.find("2.0"), std::string::npos);
}

TEST(Cli, ChainVerifyPasses) {
    const auto r = run({"chain-verify", "--n", "16", "--profile", "wigner", "--trials", "5", "--seed", "7", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    int rows = 0, passing = 0;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        ++rows;
        passing += line.size() >= 4 && line.substr(line.size() - 4) == "true";
    }
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(passing, 5);
}

TEST(Cli, ByteIdenticalAcrossRunsAndThreads) {
    const std::vector<std::string> base = {"tail", "--n", "12", "--profile", "band", "--width", "2",
                                           "--trials", "60", "--seed", "3", "--format", "csv"};
    const auto a = run(base);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "t,s,exceed,N,p_hat,ci_low,ci_high,bound");
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "3"});
    EXPECT_EQ(run(base).out, a.out);
    EXPECT_EQ(run(threaded).out, a.out);
    for (const auto& args : {std::vector<std::string>{"lemma", "renyi", "--n", "10", "--trials", "500", "--seed", "1", "--format", "json"},
                             std::vector<std::string>{"sample", "--n", "5", "--seed", "9", "--format", "csv"}}) {
        const auto x = run(args);
        ASSERT_EQ(x.code, 0) << x.err;
        EXPECT_EQ(run(args).out, x.out);
    }
}

TEST(Cli, SampleThenNormRoundTrip) {
    const fs::path p = fs::temp_directory_path() / "spectail_cli_sample.bin";
    ASSERT_EQ(run({"sample", "--n", "9", "--seed", "4", "--trial", "2", "--out", p.string()}).code, 0);
    const auto stored = run({"norm", "--in", p.string(), "--format", "json"});
    const auto fresh = run({"norm", "--n", "9", "--seed", "4", "--trial", "2", "--format", "json"});
    fs::remove(p);
    ASSERT_EQ(stored.code, 0) << stored.err;
    EXPECT_EQ(nlohmann::json::parse(stored.out)[0]["norm"], nlohmann::json::parse(fresh.out)[0]["norm"]);
    EXPECT_EQ(run({"norm", "--in", "/nonexistent/m.bin"}).code, 2);
}

TEST(Cli, NetVerifyAndLemmas) {
    EXPECT_EQ(run({"net-verify", "--dim", "2", "--epsilon", "0.5", "--alpha", "1", "--probes", "500", "--seed", "1"}).code, 0);
    const auto h = run({"lemma", "harmonic", "--n", "10", "--format", "json"});
    ASSERT_EQ(h.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(h.out)[0]["harmonic"].get<double>(), 2.9289682539682538, 1e-15);
    EXPECT_EQ(run({"lemma", "nonsense"}).code, 2);
    EXPECT_EQ(run({"lemma", "product-moments", "--p-max", "41"}).code, 2);
}

TEST(Cli, BoundsAndConfig) {
    const auto b = run({"bounds", "--n", "8", "--profile", "diagonal", "--format", "json"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_NE(b.out.find("diag_threshold"), std::string::npos);

    const fs::path cfg = fs::temp_directory_path() / "spectail_cli_cfg.json";
    std::ofstream(cfg) << R"({"schema": 1, "profile": {"kind": "wigner", "n": 6}, "trials": 20, "seed": 5})";
    const auto t = run({"--config", cfg.string(), "tail", "--format", "csv"});
    EXPECT_EQ(t.code, 0) << t.err;
    std::ofstream(cfg) << R"({"schema": 9, "profile": {"kind": "wigner", "n": 6}})";
    EXPECT_EQ(run({"--config", cfg.string(), "tail"}).code, 2);
    fs::remove(cfg);
}
