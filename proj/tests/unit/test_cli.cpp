#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include "lmgeo/cli.hpp"
#include "lmgeo/landmark_curvature.hpp"

using namespace lmgeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lmgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lmgeo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

const char* kSection = R"({"kernel":{"family":"gaussian","scale":1.0},
  "q":[[0,0],[1,0.5],[-0.4,1.1]],
  "alpha":[[0.3,-0.2],[0.1,0.7],[-0.5,0.2]],
  "beta":[[0.6,0.1],[-0.3,0.2],[0.4,-0.9]]})";

}  // namespace

TEST_F(CliTest, CurvatureReportMatchesLibrary) {
  const CliRun r = run({"curvature", "--problem", write("p.json", kSection)});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  Eigen::MatrixXd q(3, 2), a(3, 2), b(3, 2);
  q << 0, 0, 1, 0.5, -0.4, 1.1;
  a << 0.3, -0.2, 0.1, 0.7, -0.5, 0.2;
  b << 0.6, 0.1, -0.3, 0.2, 0.4, -0.9;
  const CurvatureReport expected = curvature_terms(LandmarkConfig(q), KernelSpec::gaussian(1.0), Covector(a), Covector(b));
  EXPECT_EQ(report["r1"].get<double>(), expected.r1);
  EXPECT_EQ(report["r4"].get<double>(), expected.r4);
  EXPECT_EQ(report["numerator"].get<double>(), expected.numerator);
  EXPECT_EQ(report["denominator"].get<double>(), expected.denominator);
  ASSERT_TRUE(expected.sectional.has_value());
  EXPECT_EQ(report["sectional"].get<double>(), *expected.sectional);
}

TEST_F(CliTest, CurvatureWithEqualCovectorsReportsNull) {
  const std::string problem = write("p.json", R"({"q":[[0,0],[1,0]],"alpha":[[1,0],[0,1]],"beta":[[1,0],[0,1]]})");
  const CliRun r = run({"curvature", "--problem", problem});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report["numerator"].get<double>(), 0.0);
  EXPECT_TRUE(report["sectional"].is_null());
}

TEST_F(CliTest, KernelFromFlagOverridesProblem) {
  const std::string problem = write("p.json", kSection);
  const CliRun gaussian = run({"curvature", "--problem", problem});
  const CliRun matern =
      run({"curvature", "--problem", problem, "--kernel-json", R"({"family":"matern","scale":1.0,"order":"5/2"})"});
  ASSERT_EQ(matern.code, 0) << matern.err;
  EXPECT_NE(gaussian.out, matern.out);
  const std::string kernel_file = write("k.json", R"({"family":"matern","scale":1.0,"order":"5/2"})");
  EXPECT_EQ(run({"curvature", "--problem", problem, "--kernel-json", kernel_file}).out, matern.out);
}

TEST_F(CliTest, OracleSuitePassesAndIsDeterministic) {
  const CliRun first = run({"oracle", "--trials", "50", "--seed", "7"});
  ASSERT_EQ(first.code, 0) << first.err;
  const json summary = json::parse(first.out);
  EXPECT_LT(summary["max_residual"].get<double>(), 1e-8);
  EXPECT_GE(summary["sections"].get<int>(), 50);
  EXPECT_TRUE(summary["passed"].get<bool>());
  EXPECT_EQ(run({"oracle", "--trials", "50", "--seed", "7"}).out, first.out);
}

TEST_F(CliTest, OracleAboveThresholdExitsThree) {
  const CliRun r = run({"oracle", "--trials", "5", "--tol", "1e-30"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["passed"].get<bool>());
}

TEST_F(CliTest, KernelTableRowAtTwo) {
  const CliRun r = run({"kernel-table", "--family", "gaussian", "--scale", "1", "--rho-max", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 401u);
  EXPECT_EQ(lines[0], "rho,k1,k2,k3,k4,coefT1,coefT2,coefT3,coefT4,coefT5,K_L2R1");
  bool found = false;
  for (const auto& line : lines) {
    if (line.rfind("2,", 0) == 0) {
      found = true;
      EXPECT_NEAR(std::stod(line.substr(2)), 0.3035, 5e-5);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, KernelTableWritesGammaFile) {
  const std::string table = path("table.csv");
  const std::string gamma = path("gamma.csv");
  const CliRun r = run({"kernel-table", "--family", "matern", "--order", "3/2", "--rho-max", "1", "--rho-step", "0.5",
                     "--out", table, "--gamma-out", gamma});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::vector<std::string> rows = split_lines(slurp(gamma));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "rho,gamma,dgamma,ddgamma");
  EXPECT_EQ(rows[2].substr(0, 2), "1,");
  EXPECT_EQ(split_lines(slurp(table)).size(), 3u);
}

TEST_F(CliTest, GeodesicCsvAndSummary) {
  const std::string problem =
      write("p.json", R"({"kernel":{"family":"gaussian","scale":1},"q":[[-1,0],[1,0]],"p":[[1,0],[-1,0]],
                          "t_end":1,"steps":100})");
  const CliRun r = run({"geodesic", "--problem", problem});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 102u);
  EXPECT_EQ(lines[0], "t,q_1_1,q_1_2,q_2_1,q_2_2,p_1_1,p_1_2,p_2_1,p_2_2,H");
  const json summary = json::parse(r.err);
  EXPECT_EQ(summary["steps"].get<int>(), 100);
  EXPECT_LT(summary["relative_energy_drift"].get<double>(), 1e-8);

  const std::string out = path("path.csv");
  const CliRun to_file = run({"geodesic", "--problem", problem, "--steps", "100", "--out", out});
  ASSERT_EQ(to_file.code, 0);
  EXPECT_EQ(slurp(out), r.out);
  EXPECT_EQ(json::parse(to_file.out)["steps"].get<int>(), 100);
}

TEST_F(CliTest, AdvectGrid) {
  const std::string problem = write("p.json", R"({"q":[[0,0]],"p":[[2.7,1.8]],
      "kernel":{"family":"gaussian","scale":1.5},
      "grid":{"lower":[-2,-2],"upper":[2,2],"counts":[3,4]},"t_end":1,"steps":20})");
  const CliRun r = run({"advect", "--problem", problem, "--every", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<std::string> lines = split_lines(r.out);
  EXPECT_EQ(lines[0], "t,point,x_1,x_2");
  EXPECT_EQ(lines.size(), 1u + 3u * 12u);
  EXPECT_EQ(lines[1].substr(0, 4), "0,1,");
  EXPECT_EQ(lines.back().substr(0, 5), "1,12,");
}

TEST_F(CliTest, AdvectNeedsPoints) {
  const std::string problem = write("p.json", R"({"q":[[0,0]],"p":[[1,0]]})");
  EXPECT_EQ(run({"advect", "--problem", problem}).code, 1);
}

TEST_F(CliTest, TwoPointFigureData) {
  const std::string problem = write("p.json", R"({"q":[[1,0],[-1,0]],"p":[[-10,8.6],[10,-8.6]]})");
  const std::string csv = path("two.csv");
  const CliRun r = run({"two-point", "--problem", problem, "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const json summary = json::parse(r.out);
  EXPECT_EQ(summary["classification"].get<std::string>(), "capture_forward");
  EXPECT_LT(summary["quadrature_ode_residual"].get<double>(), 1e-5);
  EXPECT_NEAR(summary["omega"].get<double>(), 8.6, 1e-12);
  const std::vector<std::string> lines = split_lines(slurp(csv));
  EXPECT_EQ(lines[0], "t,rho,theta,qbar_1,qbar_2");
  EXPECT_EQ(lines.size(), 5002u);

  const std::string other = write("q.json", R"({"q":[[1,0],[-1,0]],"p":[[-10,9],[10,-9]],"steps":500})");
  const CliRun scatter = run({"two-point", "--problem", other, "--out", path("three.csv")});
  ASSERT_EQ(scatter.code, 0) << scatter.err;
  EXPECT_EQ(json::parse(scatter.out)["classification"].get<std::string>(), "scattering");
}

TEST_F(CliTest, MalformedInputsExitOne) {
  EXPECT_EQ(run({"curvature", "--problem", write("bad.json", "{not json")}).code, 1);
  EXPECT_EQ(run({"curvature", "--problem", write("extra.json", R"({"q":[[0]],"alpha":[[1]],"beta":[[1]],"x":1})")}).code,
            1);
  EXPECT_EQ(run({"curvature", "--problem", write("noq.json", R"({"alpha":[[1]],"beta":[[1]]})")}).code, 1);
  EXPECT_EQ(run({"curvature", "--problem", write("ragged.json", R"({"q":[[0,1],[2]],"alpha":[[1]],"beta":[[1]]})")})
                .code,
            1);
  EXPECT_EQ(run({"curvature", "--problem", path("missing.json")}).code, 1);
  EXPECT_EQ(run({"curvature"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"kernel-table", "--family", "bessel"}).code, 1);
  EXPECT_EQ(run({"kernel-table", "--family", "matern", "--order", "9/2"}).code, 1);
  const std::string rough = write("rough.json", R"({"q":[[0],[1]],"p":[[1],[0]],
      "kernel":{"family":"matern","scale":1,"order":"1/2"}})");
  EXPECT_EQ(run({"geodesic", "--problem", rough}).code, 1);
  const std::string smoothed = write("lambda.json", R"({"q":[[0],[1]],"alpha":[[1],[0]],"beta":[[0],[1]],"lambda":2})");
  EXPECT_EQ(run({"curvature", "--problem", smoothed}).code, 1);
}

TEST_F(CliTest, DegenerateConfigurationExitsTwo) {
  const std::string problem = write("p.json", R"({"q":[[0,0],[0,0]],"alpha":[[1,0],[0,1]],"beta":[[0,1],[1,0]]})");
  const CliRun r = run({"curvature", "--problem", problem});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, LambdaInfIsAccepted) {
  const std::string problem =
      write("p.json", R"({"q":[[0],[1]],"alpha":[[1],[0]],"beta":[[0],[1]],"lambda":"inf"})");
  EXPECT_EQ(run({"curvature", "--problem", problem}).code, 0);
}

TEST_F(CliTest, BinaryPropagatesExitCodes) {
  const std::string good = write("p.json", kSection);
  const std::string bad = write("bad.json", R"({"q":[[0,0],[0,0]],"alpha":[[1,0],[0,1]],"beta":[[0,1],[1,0]]})");
  auto status = [&](const std::string& args) {
    const std::string command = std::string("\"") + LMGEO_CLI_PATH + "\" " + args + " > \"" + path("o.txt") +
                                "\" 2> \"" + path("e.txt") + "\"";
    const int raw = std::system(command.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("curvature --problem \"" + good + "\""), 0);
  EXPECT_EQ(json::parse(slurp(path("o.txt"))).contains("sectional"), true);
  EXPECT_EQ(status("curvature --problem \"" + bad + "\""), 2);
  EXPECT_EQ(status("bogus"), 1);
  EXPECT_EQ(status("--help"), 0);
}
