#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"paracert"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = paracert::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("paracert_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const char* name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, VerifyWithCheck) {
    const Result r = run({"verify", "--max", "1000", "--check", "--out", path("c.jsonl"), "--stats", path("s.json"),
                          "--transcript", path("t.txt")});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto stats = nlohmann::json::parse(slurp(path("s.json")));
    EXPECT_EQ(stats["bound"], 1000);
    EXPECT_EQ(stats["policy"], "max-q");
    EXPECT_EQ(stats["check"]["accepted"], true);
    EXPECT_NE(slurp(path("t.txt")).find("f(2) = 1/2"), std::string::npos);
}

TEST_F(Cli, VerifyBelowInductionStart) {
    const Result r = run({"verify", "--max", "20", "--out", path("c.jsonl")});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(fs::exists(path("c.jsonl")));
}

TEST_F(Cli, VerifyUnwritableOutput) {
    EXPECT_EQ(run({"verify", "--max", "30", "--out", "/nonexistent/dir/c.jsonl"}).code, 2);
}

TEST_F(Cli, CheckRoundTripAndTamper) {
    ASSERT_EQ(run({"verify", "--max", "500", "--out", path("c.jsonl")}).code, 0);
    const Result ok = run({"check", path("c.jsonl"), "--max", "500"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_EQ(nlohmann::json::parse(ok.out)["accepted"], true);

    std::string text = slurp(path("c.jsonl"));
    const std::string genuine = R"({"n":21,"just":{"type":"coprime_product","a":3,"b":7},"prereqs":[3,7]})";
    const std::string forged = R"({"n":21,"just":{"type":"coprime_product","a":3,"b":5},"prereqs":[3,5]})";
    text.replace(text.find(genuine), genuine.size(), forged);
    std::ofstream(path("bad.jsonl"), std::ios::binary) << text;
    const Result bad = run({"check", path("bad.jsonl"), "--max", "500"});
    EXPECT_EQ(bad.code, 1);
    const auto report = nlohmann::json::parse(bad.out);
    EXPECT_EQ(report["violations"][0]["code"], "wrong_product");

    EXPECT_EQ(run({"check", path("missing.jsonl"), "--max", "500"}).code, 2);
    std::ofstream(path("junk.jsonl")) << "{not json\n";
    EXPECT_EQ(run({"check", path("junk.jsonl"), "--max", "500"}).code, 2);
}

TEST_F(Cli, CheckWritesReportFile) {
    ASSERT_EQ(run({"verify", "--max", "100", "--out", path("c.jsonl")}).code, 0);
    EXPECT_EQ(run({"check", path("c.jsonl"), "--max", "100", "--report", path("r.json"), "--reorder"}).code, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(path("r.json")))["accepted"], true);
}

TEST_F(Cli, MinQPolicyTagsSteps) {
    ASSERT_EQ(run({"verify", "--max", "200", "--policy", "min-q", "--out", path("c.jsonl")}).code, 0);
    EXPECT_NE(slurp(path("c.jsonl")).find(R"("meta":{"policy":"min-q"})"), std::string::npos);
    EXPECT_EQ(run({"verify", "--max", "200", "--policy", "best-q"}).code, 2);
}

TEST_F(Cli, Probe) {
    const Result primes = run({"probe", "--set", "primes", "--bound", "40"});
    ASSERT_EQ(primes.code, 0) << primes.err;
    const auto p = nlohmann::json::parse(primes.out);
    EXPECT_EQ(p["determined"]["17"], "289");
    EXPECT_EQ(p["determined"]["2"], "4");

    const Result four = run({"probe", "--set", "4n", "--bound", "100"});
    ASSERT_EQ(four.code, 0);
    const auto f = nlohmann::json::parse(four.out);
    EXPECT_NE(std::find(f["free"].begin(), f["free"].end(), 2), f["free"].end());

    std::ofstream(path("empty.txt")) << "";
    const Result empty = run({"probe", "--set", "file:" + path("empty.txt"), "--bound", "10"});
    ASSERT_EQ(empty.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(empty.out)["determined"].empty());

    EXPECT_EQ(run({"probe", "--set", "squares", "--bound", "10"}).code, 2);
    EXPECT_EQ(run({"probe", "--set", "primes", "--bound", "20000"}).code, 2);
    std::ofstream(path("bad.txt")) << "3 5 x\n";
    EXPECT_EQ(run({"probe", "--set", "file:" + path("bad.txt"), "--bound", "10"}).code, 2);
}

TEST_F(Cli, Goldbach) {
    const Result four = run({"goldbach", "--max", "4"});
    ASSERT_EQ(four.code, 0);
    const auto j = nlohmann::json::parse(four.out);
    EXPECT_EQ(j["evens_checked"], 1);
    EXPECT_EQ(j["policies"]["min-q"]["histogram"]["2"], 1);
    EXPECT_TRUE(j["failures"].empty());

    const Result big = run({"goldbach", "--max", "1000000"});
    ASSERT_EQ(big.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(big.out)["failures"].empty());
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"verify"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"verify", "--max", "100", "--threads", "0"}).code, 2);
}

TEST_F(Cli, SieveLimitFromEnvironment) {
    ::setenv(paracert::cli::kSieveLimitEnv, "5000", 1);
    EXPECT_EQ(paracert::cli::sieve_limit_from_env(), 5000u);
    EXPECT_EQ(run({"verify", "--max", "1000", "--out", path("c.jsonl")}).code, 0);
    ::setenv(paracert::cli::kSieveLimitEnv, "junk", 1);
    EXPECT_FALSE(paracert::cli::sieve_limit_from_env().has_value());
    ::unsetenv(paracert::cli::kSieveLimitEnv);
}
