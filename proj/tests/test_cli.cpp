#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chreduct/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "chreduct");
    std::ostringstream out, err;
    const int code = chreduct::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(CHREDUCT_FIXTURES) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, ListSystems) {
    const Result r = run({"list-systems"});
    EXPECT_EQ(r.code, chreduct::cli::kPass);
    EXPECT_EQ(r.out, "rigid-body\nheavy-top\nrigid-body-rotors\nheavy-top-rotors\n");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"frobnicate"}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"simulate", "--system", "rigid-body", "--dt", "-1"}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"simulate", "--system", "rigid-body", "--state", "1,2"}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"simulate", "--system", "rigid-body", "--params", "I"}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"simulate", "--system", "rigid-body", "--control", "1"}).code, chreduct::cli::kBadInput);
}

TEST(Cli, UnknownNames) {
    const Result r = run({"simulate", "--system", "gyroscope"});
    EXPECT_EQ(r.code, chreduct::cli::kUnknownName);
    EXPECT_NE(r.err.find("rigid-body"), std::string::npos);  // lists the registry
    EXPECT_EQ(run({"check-equiv", "--pair", "nope"}).code, chreduct::cli::kUnknownName);
    EXPECT_EQ(run({"check-hj", "--case", fixture("unknown-hamiltonian.json")}).code, chreduct::cli::kUnknownName);
}

TEST(Cli, MalformedInput) {
    EXPECT_EQ(run({"check-hj", "--case", fixture("malformed.json")}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"check-hj", "--case", fixture("does-not-exist.json")}).code, chreduct::cli::kBadInput);
    EXPECT_EQ(run({"simulate", "--config", fixture("malformed.json")}).code, chreduct::cli::kBadInput);
}

TEST(Cli, UnwritableOutput) {
    const Result r = run({"invariants", "--out", "/nonexistent-dir/report.json"});
    EXPECT_EQ(r.code, chreduct::cli::kOutputError);
}

TEST(Cli, ChecksPassAndFail) {
    EXPECT_EQ(run({"invariants"}).code, chreduct::cli::kPass);
    EXPECT_EQ(run({"invariants", "--algebra", fixture("so3.json")}).code, chreduct::cli::kPass);
    EXPECT_EQ(run({"check-related", "--system", "rigid-body"}).code, chreduct::cli::kPass);
    EXPECT_EQ(run({"check-related", "--system", "rigid-body", "--perturb", "1e-3"}).code,
              chreduct::cli::kCheckFailed);
    EXPECT_EQ(run({"check-equiv", "--pair", "random-linear", "--params", "n=3"}).code, chreduct::cli::kPass);
    EXPECT_EQ(run({"check-equiv", "--pair", "rescaled-oscillator-forced"}).code, chreduct::cli::kCheckFailed);
    EXPECT_EQ(run({"check-orbit", "--system", "heavy-top", "--t-end", "1"}).code, chreduct::cli::kPass);
    EXPECT_EQ(run({"check-hj"}).code, chreduct::cli::kPass);
    const Result hj = run({"check-hj", "--case", fixture("oscillator-exact.json"), "--case",
                           fixture("oscillator-cubic.json")});
    EXPECT_EQ(hj.code, chreduct::cli::kPass);
    EXPECT_NE(hj.out.find("\"disagreements\": 0"), std::string::npos);
}

TEST(Cli, ReportIsDeterministic) {
    const std::vector<std::string> args{"check-related", "--system", "rigid-body-rotors", "--seed", "7"};
    const Result a = run(args);
    const Result b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("\"seed\": 7"), std::string::npos);
    EXPECT_NE(run({"check-related", "--system", "rigid-body-rotors", "--seed", "8"}).out, a.out);

    const auto path = std::filesystem::temp_directory_path() / "chreduct-cli-report.json";
    std::vector<std::string> to_file = args;
    to_file.insert(to_file.end(), {"--out", path.string()});
    const Result c = run(to_file);
    EXPECT_EQ(c.code, chreduct::cli::kPass);
    EXPECT_EQ(c.out, "");
    EXPECT_EQ(slurp(path), a.out);
    std::filesystem::remove(path);
}

TEST(Cli, SimulateFromConfigFile) {
    const Result r = run({"simulate", "--config", fixture("simulate-config.json")});
    ASSERT_EQ(r.code, chreduct::cli::kPass) << r.err;
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "t,mu0,mu1,mu2,mu3,mu4,mu5,energy,gamma_norm2,pi_dot_gamma");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    EXPECT_EQ(run({"simulate", "--config", fixture("simulate-config.json")}).out, r.out);
}

TEST(Cli, ConfigFileRejectsUnknownKeys) {
    const auto path = std::filesystem::temp_directory_path() / "chreduct-cli-config.json";
    std::ofstream(path) << R"({"system": "rigid-body", "stepsize": 0.1})";
    EXPECT_EQ(run({"simulate", "--config", path.string()}).code, chreduct::cli::kBadInput);
    std::filesystem::remove(path);
}
