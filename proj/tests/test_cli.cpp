#include <gtest/gtest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "subfree/harness.hpp"
#include "subfree/report.hpp"
#include "subfree/uniform_est.hpp"
#include "support.hpp"

namespace subfree {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(SUBFREE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buffer;
  for (std::size_t got; (got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0;) {
    out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("subfree_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    write("t.txt", "a a b b\n");
    write("w.txt", "a b\n");
    write("p.txt", "1/8\n1/8\n0.25\n0.5\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& body) {
    std::ofstream(dir_ / name) << body;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string files() const {
    return "--text " + path("t.txt") + " --word " + path("w.txt");
  }

  fs::path dir_;
};

TEST_F(Cli, Exact) {
  const CliResult r = run_cli("exact " + files());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["R"], 2);
  EXPECT_EQ(j["delta"], "1/2");
  const CliResult weighted = run_cli("exact " + files() + " --dist " + path("p.txt"));
  ASSERT_EQ(weighted.code, 0);
  EXPECT_EQ(nlohmann::json::parse(weighted.out)["delta"], "1/4");
}

TEST_F(Cli, EstimateUniformMatchesLibrary) {
  std::string text;
  for (int i = 0; i < 500; ++i) text += "a b c ";
  write("big.txt", text);
  const CliResult r = run_cli("estimate-uniform --text " + path("big.txt") + " --word " +
                        path("w.txt") + " --delta 0.1 --seed 7");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  std::vector<Symbol> symbols;
  for (int i = 0; i < 500; ++i) symbols.insert(symbols.end(), {1, 2, 3});
  const Text t(symbols);
  const UniformEstimate e = estimate_uniform(UniformOracle(t), Word({1, 2}), t.size(), 0.1, 7);
  EXPECT_EQ(j["delta_hat"].get<double>(), e.delta_hat);
  EXPECT_EQ(j["samples"], e.samples);
}

TEST_F(Cli, LowerboundMatchesLibrary) {
  const CliResult r = run_cli("lowerbound --kd 2 --delta 0.01 --n 20000 --trials 5 --seed 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, harness::render(harness::concentration_experiment(2, 0.01, 20000, 5, 1)));
}

TEST_F(Cli, DfSubcommands) {
  for (const char* cmd : {"estimate-df", "estimate-df-wc"}) {
    const CliResult r = run_cli(std::string(cmd) + " " + files() + " --dist " + path("p.txt") +
                          " --delta 0.5 --relaxed-constants 0.05 --seed 3");
    ASSERT_EQ(r.code, 0) << cmd;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["samples"], j["s1"].get<std::uint64_t>() + j["s2"].get<std::uint64_t>());
    EXPECT_EQ(j["off_spec_constants"], true);
  }
  write("aa.txt", "a a\n");
  const CliResult bad = run_cli("estimate-df-wc --text " + path("t.txt") + " --word " +
                          path("aa.txt") + " --delta 0.5");
  EXPECT_EQ(bad.code, 2);
}

TEST_F(Cli, ExperimentsAndOutputFile) {
  const CliResult sweep = run_cli("sweep --estimator uniform --ensemble periodic --n 1200 --k 3 "
                            "--deltas 0.2,0.3 --trials 3 --seed 4 --out " + path("s.jsonl"));
  ASSERT_EQ(sweep.code, 0);
  EXPECT_TRUE(sweep.out.empty());
  std::ifstream in(path("s.jsonl"));
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) nlohmann::json::parse(line);
  EXPECT_EQ(lines, 7);
  const CliResult diag = run_cli("diagnose-events --n 200 --delta 0.5 --trials 2 "
                           "--relaxed-constants 0.1 --seed 2");
  ASSERT_EQ(diag.code, 0);
  const CliResult timed = run_cli("lowerbound --kd 2 --delta 0.01 --n 2000 --trials 2 --timing");
  EXPECT_NE(timed.out.find("wall_ms"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("exact " + files() + " --bogus").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("estimate-uniform " + files()).code, 2);
  EXPECT_EQ(run_cli("estimate-uniform " + files() + " --delta -1").code, 2);
  EXPECT_EQ(run_cli("sweep --ensemble nope").code, 2);
  EXPECT_EQ(run_cli("lowerbound --kd 2 --delta 0.01 --n 9").code, 2);
  EXPECT_EQ(run_cli("exact --text " + path("missing.txt") + " --word " + path("w.txt")).code, 3);
  EXPECT_EQ(run_cli("--out " + path("no/such/dir/x") + " exact " + files()).code, 3);
  write("short.txt", "1\n");
  EXPECT_EQ(run_cli("exact " + files() + " --dist " + path("short.txt")).code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

}  // namespace
}  // namespace subfree
