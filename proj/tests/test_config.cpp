#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "config.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "runner.hpp"

using namespace lossfluid;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(LOSSFLUID_SOURCE_DIR) / "configs";

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string first_line(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lossfluid_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kMinimal = R"(horizon: 5
intensity:
  kind: constant
  rate: 0.5
service:
  kind: exponential
  rate: 1
)";

template <typename Error>
std::string message_of(const std::string& text) {
  try {
    (void)parse_config_text(text, "inline.yaml");
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST(ParseConfig, SinusoidalLognormalFile) {
  const RunConfig cfg = parse_config(kConfigs / "sinusoidal_lognormal.yaml");
  EXPECT_EQ(cfg.model.horizon(), 20.0);
  EXPECT_EQ(cfg.model.r0(), 0.0);
  EXPECT_NEAR(cfg.model.intensity().rate(2.5), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(cfg.model.service().survival(1.0), 0.308538, 1e-6);
  EXPECT_EQ(cfg.n_list, (std::vector<int>{20, 200}));
  EXPECT_EQ(cfg.reps, 50);
  EXPECT_EQ(cfg.base_seed, 1u);
}

TEST(ParseConfig, MinimalGetsDefaults) {
  const RunConfig cfg = parse_config_text(kMinimal);
  EXPECT_EQ(cfg.model.r0(), 0.0);
  EXPECT_DOUBLE_EQ(cfg.step, 5.0 / 4000);
  EXPECT_DOUBLE_EQ(cfg.tol_pin, 10 * 5.0 / 4000);
  EXPECT_FALSE(cfg.mollifier.has_value());
  EXPECT_EQ(cfg.n_list, (std::vector<int>{20, 200}));
  EXPECT_EQ(cfg.reps, 50);
  EXPECT_EQ(cfg.base_seed, 1u);
  EXPECT_TRUE(cfg.output_dir.empty());
  // G defaults to F.
  EXPECT_EQ(cfg.model.initial_service().survival(0.7), cfg.model.service().survival(0.7));
}

TEST(ParseConfig, ShippedConfigsAreValid) {
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW((void)parse_config(entry.path())) << entry.path();
  }
}

TEST(ParseConfig, R0AboveOneIsValidationError) {
  const std::string msg = message_of<ValidationError>(std::string(kMinimal) + "r0: 1.5\n");
  EXPECT_NE(msg.find("r0"), std::string::npos) << msg;
  EXPECT_NE(msg.find("inline.yaml:8"), std::string::npos) << msg;
}

TEST(ParseConfig, NonpositiveHorizonAndCapacity) {
  std::string text = kMinimal;
  text.replace(text.find("horizon: 5"), 10, "horizon: 0");
  EXPECT_NE(message_of<ValidationError>(text).find("horizon"), std::string::npos);
  const std::string bad_n = message_of<ValidationError>(std::string(kMinimal) + "harness:\n  n_list: [0, 5]\n");
  EXPECT_NE(bad_n.find("n_list"), std::string::npos) << bad_n;
}

TEST(ParseConfig, UnknownKeyRejected) {
  const std::string msg = message_of<ParseError>(std::string(kMinimal) + "solver:\n  stpe: 0.01\n");
  EXPECT_NE(msg.find("solver.stpe"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST(ParseConfig, MissingAndMalformedFieldsNamed) {
  EXPECT_NE(message_of<ParseError>("horizon: 5\nservice:\n  kind: exponential\n  rate: 1\n").find("intensity"),
            std::string::npos);
  std::string text = kMinimal;
  text.replace(text.find("rate: 0.5"), 9, "rate: fast");
  const std::string msg = message_of<ParseError>(text);
  EXPECT_NE(msg.find("intensity.rate"), std::string::npos) << msg;
  EXPECT_NE(message_of<ParseError>("horizon: [1\n").find("inline.yaml"), std::string::npos);
}

TEST(ParseConfig, InvalidDistributionParameters) {
  std::string text = kMinimal;
  text.replace(text.find("rate: 1"), 7, "rate: -1");
  EXPECT_NE(message_of<ValidationError>(text).find("service"), std::string::npos);
  const std::string sine = R"(horizon: 5
intensity: {kind: sinusoidal, base: 1, amplitude: 2, period: 3}
service: {kind: deterministic, value: 1}
)";
  EXPECT_NE(message_of<ValidationError>(sine).find("intensity"), std::string::npos);
}

TEST(ParseConfig, AllVariantsAndSections) {
  const RunConfig cfg = parse_config_text(R"(horizon: 4
r0: 0.25
intensity:
  kind: table
  times: [0, 2, 4]
  rates: [1, 3, 1]
service: {kind: weibull, shape: 1.5, scale: 0.8}
initial_service: {kind: empirical, samples: [0.5, 1.5]}
solver: {step: 0.01, mollifier: 0.1, tol_pin: 0.05}
harness: {n_list: [5, 50], reps: 12, base_seed: 9, grid_points: 10, residual_reps: 100, residual_points: 8}
output_dir: somewhere
)");
  EXPECT_DOUBLE_EQ(cfg.model.intensity().rate(1.0), 2.0);
  EXPECT_EQ(cfg.model.initial_service().survival(1.0), 0.5);
  EXPECT_EQ(*cfg.mollifier, 0.1);
  EXPECT_EQ(cfg.tol_pin, 0.05);
  EXPECT_EQ(cfg.residual_points, 8u);
  EXPECT_EQ(cfg.output_dir, "somewhere");
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Run, FluidOnIdleConfigIsAllZeros) {
  const RunConfig cfg = parse_config_text(R"(horizon: 2
intensity: {kind: constant, rate: 0}
service: {kind: exponential, rate: 1}
)");
  const fs::path dir = scratch("idle");
  run(Subcommand::Fluid, cfg, {.output_dir = dir});
  std::ifstream in(dir / "fluid.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "time,rho,w,theta,b");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string time, rho, w, theta, b;
    std::getline(fields, time, ',');
    std::getline(fields, rho, ',');
    std::getline(fields, w, ',');
    std::getline(fields, theta, ',');
    std::getline(fields, b, ',');
    EXPECT_EQ(rho, "0");
    EXPECT_EQ(theta, "0");
    EXPECT_EQ(b, "0");
    ++rows;
  }
  EXPECT_EQ(rows, 4001);
}

TEST(Run, EveryCsvStartsWithItsHeader) {
  const RunConfig cfg = parse_config(kConfigs / "deterministic_overload.yaml");
  RunConfig small = cfg;
  small.n_list = {5, 20};
  small.reps = 10;
  small.residual_reps = 100;
  const fs::path dir = scratch("headers");
  const std::map<std::string, std::string> expected{
      {"fluid.csv", "time,rho,w,theta,b"},
      {"regimes.csv", "k,tau_k,sigma_k"},
      {"error_table.csv", "n,seed,sup_err_rho,sup_err_theta,sup_err_b,max_residual_sq_over_bound"},
      {"error_summary.csv", "n,reps,metric,q1,median,q3"},
      {"overlay_n20.csv", "time,rho_n,rho,theta_n,theta,b_n,b,congestion_ratio"},
      {"residual_n20.csv", "time,mean_sq_residual,bound,ratio"},
      {"events_n5_seed1.csv", "time,kind,job_id,occupied_count"},
      {"path_n5_seed1.csv", "time,rho_n,theta_n,b_n"},
      {"blocked_fluid.csv", "time,b,congestion_ratio"},
      {"blocked_n20.csv", "time,b_n,b,congestion_ratio_n,congestion_ratio"},
  };
  for (Subcommand c : {Subcommand::Simulate, Subcommand::Fluid, Subcommand::Compare, Subcommand::Blocked}) {
    const RunReport report = run(c, small, {.output_dir = dir, .emit_plot_data = true});
    EXPECT_FALSE(report.files.empty());
    EXPECT_FALSE(report.summary.empty());
  }
  for (const auto& [file, header] : expected) {
    ASSERT_TRUE(fs::exists(dir / file)) << file;
    EXPECT_EQ(first_line(dir / file), header) << file;
  }
  EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
  for (const char* plot : {"plot_rho.dat", "plot_rho_n_n20.dat", "plot_b.dat"}) {
    EXPECT_TRUE(fs::exists(dir / plot)) << plot;
    EXPECT_EQ(first_line(dir / plot).front(), '#');
  }
}

TEST(Run, RerunIsByteIdentical) {
  RunConfig cfg = parse_config(kConfigs / "deterministic_overload.yaml");
  cfg.n_list = {5, 20};
  cfg.reps = 10;
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  for (Subcommand c : {Subcommand::Simulate, Subcommand::Compare, Subcommand::Blocked}) {
    run(c, cfg, {.output_dir = a, .threads = 1});
    run(c, cfg, {.output_dir = b, .threads = 3});
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
    ++compared;
  }
  EXPECT_GT(compared, 5);
}

TEST(Run, ParseSubcommand) {
  EXPECT_EQ(parse_subcommand("compare"), Subcommand::Compare);
  EXPECT_FALSE(parse_subcommand("plot").has_value());
}
