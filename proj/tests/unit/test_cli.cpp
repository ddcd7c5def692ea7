#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "ghost/errors.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kDeskConfig = R"(# desk-scale source
source.sigma_per_m = 1e6
source.omega_m = 1e-2
geometry.z0_m = 1e-4
geometry.epsilon_m = 1e-5
geometry.lambda_m = 702e-9
geometry.L1_m = 0.5
geometry.L2_m = 0.5
)";

const std::string kWideConfig = R"(source.sigma_per_m = 1e6
source.omega_m = 1.0
geometry.z0_m = 1e-4
geometry.epsilon_m = 1e-5
geometry.lambda_m = 702e-9
geometry.L1_m = 0.5
geometry.L2_m = 0.5
run.z2_window_m = 0.025
)";

const std::string kDenseConfig = R"(source.sigma_per_m = 2e5
source.omega_m = 2e-4
geometry.z0_m = 7.2e-5
geometry.epsilon_m = 2.4e-5
geometry.lambda_m = 702e-9
geometry.L1_m = 0.008
geometry.L2_m = 0.008
run.z2_window_m = 1e-3
)";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ghostint_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& text, const std::string& name = "run.cfg") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ghostint");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return ghostint::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::map<std::string, std::string> report(const fs::path& p) {
    std::map<std::string, std::string> kv;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, ValidateAcceptsBundledConfig) {
  EXPECT_EQ(run({"validate", "--config", GHOSTINT_DEFAULT_CONFIG}), ghostint::kOk);
  EXPECT_NE(out_.str().find("config ok"), std::string::npos);
  EXPECT_NE(out_.str().find("expected_w_ab_m=0.0105"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"validate", "--config", write_config(kDeskConfig + "geometry.z1_m = 3\n")}),
            ghostint::kConfigError);
  EXPECT_NE(err_.str().find("unknown key geometry.z1_m"), std::string::npos);
  EXPECT_EQ(run({"validate", "--config", write_config("source.sigma_per_m = 1e6\n")}),
            ghostint::kConfigError);
  EXPECT_NE(err_.str().find("missing required key"), std::string::npos);
  EXPECT_EQ(run({"validate", "--config", write_config(kDeskConfig + "run.samples = many\n")}),
            ghostint::kConfigError);
  EXPECT_EQ(run({"validate", "--config", write_config(kDeskConfig + "run.mode = fast\n")}),
            ghostint::kConfigError);
  EXPECT_EQ(run({"validate", "--config",
                 write_config(kDeskConfig + "detector.g12 = 0.9\ndetector.g13 = 0\ndetector.g23 = 0.9\n")}),
            ghostint::kConfigError);
  EXPECT_NE(err_.str().find("NotPositiveSemidefinite"), std::string::npos);
  EXPECT_EQ(run({"validate", "--config", write_config(kDeskConfig + "geometry.z0_m = 2e-4\n")}),
            ghostint::kConfigError);
  EXPECT_NE(err_.str().find("duplicate key"), std::string::npos);
  EXPECT_EQ(run({"validate", "--config", (dir_ / "missing.cfg").string()}), ghostint::kConfigError);
  EXPECT_EQ(run({}), ghostint::kConfigError);
}

TEST_F(Cli, GhostDefaultConfigResolvesFringes) {
  ASSERT_EQ(run({"ghost", "--config", GHOSTINT_DEFAULT_CONFIG, "--out", dir_.string()}), ghostint::kOk)
      << err_.str();
  std::ifstream csv(dir_ / "pattern.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "z2_m,density_analytic");
  std::size_t rows = 0;
  double peak = 0.0;
  while (std::getline(csv, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    peak = std::max(peak, v);
    ++rows;
  }
  EXPECT_EQ(rows, 4001u);
  EXPECT_EQ(peak, 1.0);
  auto kv = report(dir_ / "report.txt");
  EXPECT_GE(std::stoi(kv["principal_peaks"]), 5);
  EXPECT_NEAR(std::stod(kv["primary_width_m"]), 1.053e-2, 0.02 * 1.053e-2);
}

TEST_F(Cli, BothModesReportDeviation) {
  ASSERT_EQ(run({"ghost", "--config", write_config(kWideConfig), "--out", dir_.string(), "--mode", "both"}),
            ghostint::kOk)
      << err_.str();
  auto kv = report(dir_ / "report.txt");
  ASSERT_TRUE(kv.count("rms_deviation"));
  EXPECT_LE(std::stod(kv["rms_deviation"]), 1e-2);
  EXPECT_EQ(kv["oracle_strategy"], "slit_adjoint");
  std::ifstream csv(dir_ / "pattern.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "z2_m,density_analytic,density_oracle");
}

TEST_F(Cli, OverlappingSlitsWarnButRun) {
  const std::string cfg = R"(source.sigma_per_m = 1e6
source.omega_m = 1.0
geometry.z0_m = 1e-5
geometry.epsilon_m = 2e-5
geometry.lambda_m = 702e-9
geometry.L1_m = 0.5
geometry.L2_m = 0.5
)";
  EXPECT_EQ(run({"ghost", "--config", write_config(cfg), "--out", dir_.string()}), ghostint::kOk);
  EXPECT_NE(err_.str().find("warning: epsilon >= z0"), std::string::npos);
}

TEST_F(Cli, NumericalGuardExitsThree) {
  const std::string cfg = kDeskConfig + "run.mode = oracle\nrun.oracle_strategy = full_grid\n";
  EXPECT_EQ(run({"ghost", "--config", write_config(cfg), "--out", dir_.string()}), ghostint::kNumericalGuard);
  EXPECT_NE(err_.str().find("UnderResolved"), std::string::npos);
}

TEST_F(Cli, DualityIdentityGram) {
  const std::string cfg = kDeskConfig +
                          "detector.g12 = 0\ndetector.g13 = 0\ndetector.g23 = 0\nrun.pattern_source = sampled\n";
  EXPECT_EQ(run({"duality", "--config", write_config(cfg), "--out", dir_.string()}), ghostint::kOk);
  std::ifstream in(dir_ / "duality.jsonl");
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["D"].get<double>(), 1.0);
  EXPECT_LE(j["V2"].get<double>(), 0.05);
  EXPECT_EQ(j["pattern_source"], "sampled");
  for (const char* key : {"D", "V2", "bound_lhs", "margin", "pattern_source"}) EXPECT_TRUE(j.contains(key));
}

TEST_F(Cli, DualityNeedsDetectorOrSweep) {
  EXPECT_EQ(run({"duality", "--config", write_config(kDeskConfig), "--out", dir_.string()}),
            ghostint::kConfigError);
}

TEST_F(Cli, TwoSlitFlagSwitchesRelation) {
  const std::string cfg = kDeskConfig + "detector.g12 = 0\ndetector.g13 = 0.5\ndetector.g23 = 0\nrun.two_slit = true\n";
  EXPECT_EQ(run({"duality", "--config", write_config(cfg), "--out", dir_.string()}), ghostint::kOk);
  const auto j = nlohmann::json::parse(slurp(dir_ / "duality.jsonl"));
  EXPECT_EQ(j["relation"], "two_slit");
  EXPECT_DOUBLE_EQ(j["D"].get<double>(), 0.5);
  EXPECT_NEAR(j["bound_lhs"].get<double>(), j["V2"].get<double>() + 0.5, 1e-15);
  const std::string bad = kDeskConfig + "detector.g12 = 0.5\ndetector.g13 = 0.5\ndetector.g23 = 0\nrun.two_slit = true\n";
  EXPECT_EQ(run({"duality", "--config", write_config(bad, "bad.cfg"), "--out", dir_.string()}),
            ghostint::kConfigError);
}

TEST_F(Cli, SweepExitCodeFollowsViolations) {
  const std::string cfg = kDeskConfig + "run.sweep_count = 2000\n";
  const int rc = run({"duality", "--config", write_config(cfg), "--out", dir_.string(), "--seed", "9"});
  std::size_t lines = 0, violations = 0;
  std::ifstream in(dir_ / "duality.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    if (nlohmann::json::parse(line)["margin"].get<double>() < -1e-9) ++violations;
  }
  EXPECT_EQ(lines, 2000u);
  EXPECT_NE(out_.str().find("violations=" + std::to_string(violations)), std::string::npos);
  EXPECT_EQ(rc, violations == 0 ? ghostint::kOk : ghostint::kDualityViolation);
}

TEST_F(Cli, ByteIdenticalReruns) {
  const std::string cfg = write_config(kWideConfig + "run.sweep_count = 50\n");
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run({"ghost", "--config", cfg, "--out", a.string(), "--mode", "both"}), ghostint::kOk);
  ASSERT_EQ(run({"ghost", "--config", cfg, "--out", b.string(), "--mode", "both"}), ghostint::kOk);
  EXPECT_EQ(slurp(a / "pattern.csv"), slurp(b / "pattern.csv"));
  EXPECT_EQ(slurp(a / "report.txt"), slurp(b / "report.txt"));
  run({"duality", "--config", cfg, "--out", a.string(), "--seed", "5"});
  run({"duality", "--config", cfg, "--out", b.string(), "--seed", "5"});
  EXPECT_EQ(slurp(a / "duality.jsonl"), slurp(b / "duality.jsonl"));
  run({"duality", "--config", cfg, "--out", b.string(), "--seed", "6"});
  EXPECT_NE(slurp(a / "duality.jsonl"), slurp(b / "duality.jsonl"));
}

TEST_F(Cli, GridDump) {
  const std::string cfg = kDenseConfig + "run.mode = oracle\nrun.oracle_strategy = full_grid\nrun.dump_grid = true\n";
  ASSERT_EQ(run({"ghost", "--config", write_config(cfg), "--out", dir_.string()}), ghostint::kOk) << err_.str();
  EXPECT_EQ(fs::file_size(dir_ / "grid.bin"), 32u + 1024u * 1024u * 16u);
}

TEST(ConfigParser, CommentsPhasesAndGrid) {
  std::istringstream in(kDenseConfig +
                        "detector.g12 = 0.5  # trailing comment\ndetector.g13 = 0.5\ndetector.g23 = 0.5\n"
                        "detector.phase12_rad = 1.0\nrun.grid.n1 = 512\nrun.grid.span1_m = 1e-3\n"
                        "run.grid.span2_m = 2e-3\nrun.exact_gamma = true\n");
  const auto c = ghostint::parse_config(in);
  ASSERT_TRUE(c.detector.has_value());
  EXPECT_NEAR(std::arg(c.detector->gram()[0][1]), 1.0, 1e-15);
  ASSERT_TRUE(c.run.grid.has_value());
  EXPECT_EQ(c.run.grid->n1, 512u);
  EXPECT_EQ(c.run.grid->n2, 1024u);
  EXPECT_TRUE(c.run.exact_gamma);
  std::istringstream bad("source.sigma_per_m 1e6\n");
  EXPECT_THROW(ghostint::parse_config(bad), ghost::Error);
}
