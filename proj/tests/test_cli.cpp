#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gupqm/cli.hpp"

using gupqm::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = gupqm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("gupqm_test_" + name);
  std::ofstream(path) << body;
  return path;
}

// Runs the built executable and returns stdout plus the exit status.
Run run_binary(const std::string& args) {
  const std::string cmd = std::string(GUPQM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

}  // namespace

TEST(Cli, CoincidentFreeKernel) {
  const auto r = run({"kernel", "--system", "free", "--dim", "2", "--alpha", "0", "--q0", "0,0", "--qf", "0,0",
                      "--time", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["amplitude"]["re"].get<double>(), 0.0);
  EXPECT_NEAR(j["amplitude"]["im"].get<double>(), -1.0 / (2.0 * gupqm::kPi), 1e-17);
  EXPECT_TRUE(j["S0"].contains("re"));
  EXPECT_TRUE(j["S1"].contains("im"));
}

TEST(Cli, KernelRoundTripsThroughJson) {
  const auto r = run({"kernel", "--system", "sho", "--omega", "0.7", "--alpha", "1e-3", "--q0", "0.1,0.2", "--qf",
                      "-0.3,0.4", "--time", "1.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto k = gupqm::kernel_from_json(Json::parse(r.out));
  const auto direct = gupqm::sho_kernel(k.params, k.endpoints);
  EXPECT_EQ(k.amplitude, direct.amplitude);
  EXPECT_EQ(k.S1, direct.S1);
}

TEST(Cli, BoundCsvMinimumRespectsMinimalLength) {
  const auto r = run({"bound", "--alpha", "1", "--hbar", "1", "--dp-min", "0.2", "--dp-max", "2", "--samples", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "dP,dQ_bound");
  double lowest = 1e300, best_dp = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double dp = std::stod(line.substr(0, comma)), dq = std::stod(line.substr(comma + 1));
    if (dq < lowest) lowest = dq, best_dp = dp;
    ++rows;
  }
  EXPECT_EQ(rows, 50);
  const double step = 1.8 / 49.0;
  // The curve is flat at its minimum, so the grid error is second order in the step.
  EXPECT_GE(lowest, std::sqrt(3.0) - 1e-12);
  EXPECT_LE(lowest - std::sqrt(3.0), 3.0 * std::sqrt(3.0) * step * step);
  EXPECT_NEAR(best_dp, 1.0 / std::sqrt(3.0), step);
}

TEST(Cli, VerifyAllPasses) {
  const auto r = run({"verify", "all", "--trials", "20", "--seed", "7", "--dim", "2", "--alpha", "1e-3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  ASSERT_EQ(j["suites"].size(), gupqm::suite_names().size());
  for (const auto& suite : j["suites"])
    for (const auto& c : suite["checks"]) {
      EXPECT_TRUE(c["passed"].get<bool>()) << c.dump();
      if (!c["upper"].is_null()) {
        EXPECT_LE(c["value"].get<double>(), c["upper"].get<double>());
      }
      if (!c["lower"].is_null()) {
        EXPECT_GE(c["value"].get<double>(), c["lower"].get<double>());
      }
    }
}

TEST(Cli, DeterministicAndJobsIndependent) {
  const std::vector<std::string> base = {"verify", "composition", "--trials", "8", "--seed", "3"};
  const auto a = run(base);
  const auto b = run(base);
  auto with_jobs = base;
  with_jobs.insert(with_jobs.begin(), {"--jobs", "3"});
  const auto c = run(with_jobs);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("GUPQM_SEED", "11", 1);
  const auto env = run({"verify", "eom", "--trials", "2"});
  ::unsetenv("GUPQM_SEED");
  const auto flag = run({"verify", "eom", "--trials", "2", "--seed", "11"});
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(Json::parse(env.out)["seed"].get<int>(), 11);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = temp_file("bound.cfg", "# bound sweep\nalpha = 0.5\nsamples = 3\n");
  const auto from_file = Json::parse(run({"bound", "--config", cfg.string(), "--format", "json"}).out);
  EXPECT_EQ(from_file["alpha"].get<double>(), 0.5);
  EXPECT_EQ(from_file["curve"].size(), 3u);
  const auto overridden =
      Json::parse(run({"bound", "--config", cfg.string(), "--samples", "5", "--format", "json"}).out);
  EXPECT_EQ(overridden["alpha"].get<double>(), 0.5);
  EXPECT_EQ(overridden["curve"].size(), 5u);
}

TEST(Cli, ConfigFileErrors) {
  const auto bad = temp_file("bad.cfg", "alpha 0.5\n");
  EXPECT_EQ(run({"bound", "--config", bad.string()}).code, 2);
  EXPECT_EQ(run({"bound", "--config", "/nonexistent/gupqm.cfg"}).code, 2);
}

TEST(Cli, SweepKeepsInputOrder) {
  const std::vector<std::string> args = {"action", "--q0", "0", "--qf", "1", "--alpha", "0.01",
                                         "--sweep", "time:1:2:5", "--format", "csv"};
  const auto serial = run(args);
  auto parallel = args;
  parallel.insert(parallel.begin(), {"--jobs", "4"});
  ASSERT_EQ(serial.code, 0) << serial.err;
  EXPECT_EQ(serial.out, run(parallel).out);
  std::istringstream in(serial.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "time,S0,S1,total");
  std::getline(in, line);
  EXPECT_EQ(line, "1.0,0.5,-1.0,0.49");
}

TEST(Cli, LogSweep) {
  const auto r = run({"green", "--sweep", "epsilon:0.25:4:5:log", "--alpha", "1e-3", "--compare-numeric"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 5u);
  EXPECT_NEAR(j["points"][2]["epsilon"].get<double>(), 1.0, 1e-15);
  for (const auto& p : j["points"]) EXPECT_LT(p["delta"].get<double>(), 1e-6);
}

TEST(Cli, SpectrumReportsShellTwo) {
  const auto r = run({"spectrum", "--alpha", "1e-5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["levels"].size(), 6u);
  EXPECT_EQ(j["shell2"]["formula_diagonal_shifts"], Json::parse("[13.0, 12.0, 13.0]"));
  // Raw shifts still carry the second-order tail, about 100 alpha.
  const auto oracle = j["shell2"]["oracle_shifts"];
  EXPECT_NEAR(oracle[0].get<double>(), 12.0, 5e-3);
  EXPECT_NEAR(oracle[2].get<double>(), 14.0, 5e-3);
  const auto first = j["shell2"]["oracle_first_order"];
  EXPECT_NEAR(first[0].get<double>(), 12.0, 1e-6);
  EXPECT_NEAR(first[1].get<double>(), 12.0, 1e-6);
  EXPECT_NEAR(first[2].get<double>(), 14.0, 1e-6);
  for (int k = 0; k < 3; ++k) {
    const auto& lv = j["levels"][static_cast<std::size_t>(k)];
    EXPECT_LT(std::abs(lv["delta"].get<double>()) / lv["oracle"].get<double>(), 1e-8);
  }
}

TEST(Cli, CsvHeaders) {
  EXPECT_EQ(run({"spectrum", "--format", "csv"}).out.substr(0, 30), "index,n1,n2,formula,oracle,del");
  EXPECT_EQ(run({"kernel", "--q0", "0", "--qf", "1", "--format", "csv"}).out.substr(0, 25),
            "amplitude_re,amplitude_im");
  EXPECT_EQ(run({"verify", "eom", "--trials", "1", "--format", "csv"}).out.substr(0, 39),
            "suite,check,trial,value,lower,upper,pas");
}

TEST(Cli, UsageAndDomainErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"kernel", "--q0", "0,0", "--dim", "3"}).code, 2);
  EXPECT_EQ(run({"kernel", "--q0", "0,x"}).code, 2);
  EXPECT_EQ(run({"kernel", "--system", "sho", "--omega", "1", "--q0", "0", "--qf", "1", "--time", "3.141592653589793"})
                .code,
            2);
  EXPECT_EQ(run({"kernel", "--mass", "-1", "--q0", "0"}).code, 2);
  EXPECT_EQ(run({"action", "--q0", "0", "--euclidean"}).code, 2);
  EXPECT_EQ(run({"green", "--separation", "0"}).code, 2);
  EXPECT_EQ(run({"kernel", "--sweep", "color:1:2:3", "--q0", "0"}).code, 2);
  EXPECT_EQ(run({"verify", "nonsense"}).code, 2);
}

TEST(Cli, ConvergenceFailureExitsOne) {
  EXPECT_EQ(run({"spectrum", "--dim", "1", "--alpha", "0.5", "--basis", "16"}).code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "gupqm_test_out.json";
  std::filesystem::remove(path);
  const auto r = run({"--out", path.string(), "bound", "--samples", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  EXPECT_EQ(Json::parse(body.str())["curve"].size(), 4u);
}

TEST(CliBinary, ByteIdenticalRuns) {
  const auto a = run_binary("verify all --trials 5 --seed 7");
  const auto b = run_binary("--jobs 2 verify all --trials 5 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("kernel --q0 0 --qf 1").code, 0);
  EXPECT_EQ(run_binary("kernel --bogus").code, 2);
}
