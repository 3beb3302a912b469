#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string output;  // stdout and stderr together
};

Result run(const std::string& args) {
  const std::string command = std::string(TAILSITTER_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.output.append(buffer, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tailsitter_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunTwiceGivesIdenticalLogs) {
  for (const char* name : {"a.csv", "b.csv"}) {
    const Result r = run("run --scenario hover --duration 60 --seed 7 --out-log " + path(name) +
                         " --out-metrics " + path("m.json"));
    ASSERT_EQ(r.status, 0) << r.output;
  }
  const std::string a = slurp(path("a.csv"));
  EXPECT_GT(a.size(), 100000U);
  EXPECT_EQ(a, slurp(path("b.csv")));
  const auto metrics = nlohmann::json::parse(slurp(path("m.json")));
  EXPECT_TRUE(metrics.contains("rms_x_m"));
  EXPECT_TRUE(metrics.contains("latency_s"));
}

TEST_F(Cli, MetricsToStdout) {
  const Result r = run("run --scenario circle --duration 10 --estimator complementary");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NO_THROW(nlohmann::json::parse(r.output));
}

TEST_F(Cli, ValidateReportsMissingKey) {
  std::ifstream in(DEFAULT_CONFIG);
  std::ofstream out(path("no_kt.cfg"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("k_t ", 0) != 0) out << line << '\n';
  }
  out.close();
  const Result bad = run("validate --config " + path("no_kt.cfg"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.output.find("config-invalid"), std::string::npos) << bad.output;
  EXPECT_NE(bad.output.find("k_t"), std::string::npos) << bad.output;

  const Result good = run(std::string("validate --config ") + DEFAULT_CONFIG);
  EXPECT_EQ(good.status, 0) << good.output;
}

TEST_F(Cli, SysidRoundTrip) {
  ASSERT_EQ(run("sysid synth --out " + path("static.csv")).status, 0);
  const Result fit = run("sysid fit --in " + path("static.csv") + " --out " + path("fit.cfg"));
  ASSERT_EQ(fit.status, 0) << fit.output;
  std::ifstream in(path("fit.cfg"));
  const std::map<std::string, double> expected{
      {"k_t", 7.86e-6}, {"k_m", 1.8e-7}, {"k_l", 3.48e-6}, {"k_d", 1.75e-6}, {"k_p", 3.44e-7}};
  int seen = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    const std::string key = line.substr(0, line.find(' '));
    const double value = std::stod(line.substr(eq + 1));
    ASSERT_TRUE(expected.contains(key)) << key;
    EXPECT_NEAR(value / expected.at(key), 1.0, 1e-9) << key;
    ++seen;
  }
  EXPECT_EQ(seen, 5);
  // The fitted constants layer over a full configuration.
  EXPECT_EQ(run(std::string("validate --config ") + DEFAULT_CONFIG + " --config " + path("fit.cfg")).status, 0);
}

TEST_F(Cli, SysidWithoutDeflectionFails) {
  std::ofstream out(path("flat.csv"));
  out << "omega_rad_s, delta_rad, fx, fy, fz, mx, my, mz\n"
      << "300, 0, 0, 0, -0.7074, 0, 0, 0.0162\n"
      << "500, 0, 0, 0, -1.965, 0, 0, 0.045\n";
  out.close();
  const Result r = run("sysid fit --in " + path("flat.csv"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("insufficient-excitation"), std::string::npos) << r.output;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("fly").status, 2);
  EXPECT_EQ(run("run --bogus").status, 2);
  EXPECT_EQ(run("run --seed notanumber").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, RuntimeErrors) {
  const Result r = run("run --scenario loop");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("config-invalid"), std::string::npos) << r.output;
  const Result io = run("run --config " + path("missing.cfg"));
  EXPECT_EQ(io.status, 1);
  EXPECT_NE(io.output.find("error: io"), std::string::npos) << io.output;
  const Result window = run("run --duration 2");
  EXPECT_EQ(window.status, 1);
  EXPECT_NE(window.output.find("metrics-window"), std::string::npos) << window.output;
}
