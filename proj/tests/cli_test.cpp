#include "stackdel/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace stackdel {
namespace {

using testing::expect_error;
using testing::R;
using testing::Rs;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run_args(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command_line(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("stackdel_cli_test_" + name);
}

TEST(Cli, SolveJsonCarriesExactValues) {
  const CliRun r = run_args({"solve", "--n", "2", "--a", "1", "--c", "0", "--regime", "stackelberg-delegation",
                          "--format", "json"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(rational_from_json(j["incentives"][0]), 0);
  EXPECT_EQ(j["incentives"][1], "1/3");
  EXPECT_EQ(j["profits"], Json::parse(R"(["1/18", "1/12"])"));
}

TEST(Cli, SolveJsonRoundTrips) {
  for (const char* regime : {"stackelberg-delegation", "cournot-delegation", "stackelberg-plain", "cournot-plain"})
    for (const char* style : {"fraction", "both"}) {
      const CliRun r = run_args({"solve", "--n", "5", "--a", "7/2", "--c", "1/3", "--regime", regime,
                              "--rational-style", style});
      ASSERT_EQ(r.status, kExitOk) << r.err;
      const EquilibriumOutcome parsed = outcome_from_json(Json::parse(r.out));
      EXPECT_EQ(parsed, solve_regime({5, R("7/2"), R("1/3")}, parse_regime(regime))) << regime << " " << style;
    }
}

TEST(Cli, ThresholdWithBracket) {
  const CliRun r = run_args({"threshold", "--n", "10"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["threshold"], 6);
  EXPECT_EQ(j["r_lower"], "256");
  EXPECT_EQ(j["r_upper"], "512");
  EXPECT_NEAR(to_double(rational_from_json(j["bound"])), 328.14, 0.01);
}

TEST(Cli, CompareCsvRow) {
  const CliRun r = run_args({"compare", "--n", "3", "--a", "1", "--c", "0", "--format", "csv"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "n,i,a_i,a_i_dec,q_i,q_i_dec,u_i,u_i_dec,u_bar_i,u_bar_i_dec,prefers_delegation,a_C,a_C_dec,u_C,u_C_dec,"
            "Q_S,Q_S_dec,Q_C,Q_C_dec,threshold");
  std::getline(lines, row);
  EXPECT_EQ(row,
            "3,1,0,0,2/9,0.222222222222,1/81,0.0123456790123,1/16,0.0625,false,1/5,0.2,3/100,0.03,17/18,"
            "0.944444444444,9/10,0.9,2");
}

TEST(Cli, SweepCsvHasOneRowPerStage) {
  const CliRun r = run_args({"sweep", "--n-range", "2", "6", "--format", "csv", "--rational-style", "fraction"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,i,a_i,q_i,u_i,u_bar_i,prefers_delegation,a_C,u_C,Q_S,Q_C,threshold");
  int rows = 0;
  int last_n = 0, last_i = 0;
  while (std::getline(lines, line)) {
    ++rows;
    int n = 0, i = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d", &n, &i), 2);
    EXPECT_TRUE(n > last_n || (n == last_n && i == last_i + 1));
    last_n = n;
    last_i = i;
  }
  EXPECT_EQ(rows, 2 + 3 + 4 + 5 + 6);
}

TEST(Cli, DecimalStyle) {
  const CliRun r = run_args({"solve", "--n", "2", "--regime", "cournot-delegation", "--rational-style", "decimal"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["incentives"][0], "0.2");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--n-range", "2", "12", "--format", "csv"};
  EXPECT_EQ(run_args(args).out, run_args(args).out);
  const std::vector<std::string> json_args{"compare", "--n", "7", "--a", "3", "--c", "1"};
  EXPECT_EQ(run_args(json_args).out, run_args(json_args).out);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const auto path = temp_file("config.json");
  std::ofstream(path) << R"({"command": "solve", "params": {"n": 3, "a": "11", "c": "1"},
                            "regime": "stackelberg-delegation", "format": "json"})";
  const CliRun from_file = run_args({"--config", path.string()});
  ASSERT_EQ(from_file.status, kExitOk) << from_file.err;
  EXPECT_EQ(Json::parse(from_file.out)["incentives"], Json::parse(R"(["0", "10/9", "10/3"])"));

  const CliRun overridden = run_args({"--config", path.string(), "--n", "2", "--c", "0"});
  ASSERT_EQ(overridden.status, kExitOk) << overridden.err;
  const Json j = Json::parse(overridden.out);
  EXPECT_EQ(j["params"]["n"], 2);
  EXPECT_EQ(j["params"]["a"], "11");
  EXPECT_EQ(j["incentives"][1], "11/3");

  // A subcommand on the command line replaces the file's command.
  const CliRun threshold = run_args({"threshold", "--config", path.string()});
  EXPECT_EQ(threshold.status, kExitUsage);  // the file's regime does not apply to threshold
  std::filesystem::remove(path);
}

TEST(Cli, WritesToOutputPath) {
  const auto path = temp_file("out.csv");
  const CliRun r = run_args({"threshold", "--n", "3", "--format", "csv", "--output", path.string()});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), "n,threshold,r_lower,r_lower_dec,bound,bound_dec,r_upper,r_upper_dec,tie\n"
                           "3,2,16,16,97/4,24.25,32,32,false\n");
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_args({}).status, kExitUsage);
  EXPECT_EQ(run_args({"solve", "--n", "2"}).status, kExitUsage);
  EXPECT_EQ(run_args({"solve", "--n", "two", "--regime", "cournot-plain"}).status, kExitUsage);
  EXPECT_EQ(run_args({"solve", "--n", "2", "--regime", "monopoly"}).status, kExitUsage);
  EXPECT_EQ(run_args({"compare", "--n", "2", "--format", "xml"}).status, kExitUsage);
  EXPECT_EQ(run_args({"compare", "--n", "2", "--a", "x"}).status, kExitUsage);
  EXPECT_EQ(run_args({"compare", "--n", "2", "--regime", "cournot-plain"}).status, kExitUsage);
  EXPECT_EQ(run_args({"sweep"}).status, kExitUsage);
  EXPECT_EQ(run_args({"sweep", "--n-range", "5", "3"}).status, kExitUsage);
  EXPECT_EQ(run_args({"compare", "--unknown"}).status, kExitUsage);
  EXPECT_EQ(run_args({"--config", "/nonexistent/stackdel.json"}).status, kExitUsage);
  const CliRun r = run_args({"solve", "--n", "2"});
  EXPECT_NE(r.err.find("USAGE"), std::string::npos);
}

TEST(Cli, ModelErrorsSurfaceWithMessage) {
  const CliRun degenerate = run_args({"compare", "--n", "3", "--a", "1", "--c", "2"});
  EXPECT_EQ(degenerate.status, kExitModelError);
  EXPECT_NE(degenerate.err.find("DEGENERATE_DEMAND"), std::string::npos);
  const CliRun big = run_args({"threshold", "--n", "65"});
  EXPECT_EQ(big.status, kExitModelError);
  EXPECT_NE(big.err.find("BAD_N"), std::string::npos);
}

TEST(Cli, HelpExitsCleanly) {
  const CliRun r = run_args({"--help"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, VerifyReportsPass) {
  const CliRun r = run_args({"verify", "--format", "json"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["reports"].size(), 2u);
  EXPECT_LT(j["reports"][1]["max_gain"].get<double>(), kGainTolerance);
}

TEST(Config, UnknownKeysAndBadShapesAreRejected) {
  RunConfig cfg;
  expect_error(ErrorCode::kUsage, [&] { apply_config_json(Json::parse(R"({"colour": 1})"), cfg); });
  expect_error(ErrorCode::kUsage, [&] { apply_config_json(Json::parse(R"({"n_range": [2]})"), cfg); });
  expect_error(ErrorCode::kUsage, [&] { apply_config_json(Json::parse(R"({"format": 3})"), cfg); });
  expect_error(ErrorCode::kUsage, [&] { apply_config_json(Json::parse("[1, 2]"), cfg); });
}

TEST(Config, EffectiveStyleDefaults) {
  RunConfig cfg;
  EXPECT_EQ(cfg.effective_style(), RationalStyle::kFraction);
  cfg.format = OutputFormat::kCsv;
  EXPECT_EQ(cfg.effective_style(), RationalStyle::kBoth);
  cfg.rational_style = RationalStyle::kDecimal;
  EXPECT_EQ(cfg.effective_style(), RationalStyle::kDecimal);
}

TEST(Io, RationalJsonForms) {
  EXPECT_EQ(rational_to_json(R("-2/3"), RationalStyle::kFraction), "-2/3");
  const Json both = rational_to_json(R("1/8"), RationalStyle::kBoth);
  EXPECT_EQ(both["exact"], "1/8");
  EXPECT_EQ(both["decimal"], "0.125");
  EXPECT_EQ(rational_from_json(both), R("1/8"));
  EXPECT_EQ(rational_from_json(Json(3)), 3);
  expect_error(ErrorCode::kUsage, [] { rational_from_json(Json(0.5)); });
  expect_error(ErrorCode::kUsage, [] { outcome_from_json(Json::parse(R"({"regime": "cournot-plain"})")); });
}

}  // namespace
}  // namespace stackdel
