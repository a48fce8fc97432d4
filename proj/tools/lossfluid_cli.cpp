// lossfluid-cli: run simulations, fluid solves and comparisons from a YAML config.
//
//   lossfluid-cli simulate configs/sinusoidal_lognormal.yaml --out results/
//   lossfluid-cli compare configs/sinusoidal_lognormal.yaml --emit-plot-data
//
// Output directory: --out, else the config's output_dir, else
// $LOSSFLUID_OUTPUT_DIR, else ./lossfluid-out.

#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "lossfluid/lossfluid.h"

namespace {

struct ConfigDeleter {
  void operator()(lf_config* c) const { lf_config_free(c); }
};

int report(lf_status status, const std::string& context) {
  std::cerr << "lossfluid-cli: " << context << ": " << lf_status_name(status) << ": " << lf_last_error() << '\n';
  return static_cast<int>(status);
}

std::string output_dir(const std::string& flag, const lf_config* config) {
  if (!flag.empty()) return flag;
  const char* from_config = "";
  lf_config_output_dir(config, &from_config);
  if (from_config != nullptr && *from_config != '\0') return from_config;
  if (const char* env = std::getenv("LOSSFLUID_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "lossfluid-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-system simulation and fluid-limit toolkit"};
  app.set_version_flag("--version", std::string(lf_version()));
  app.require_subcommand(1, 1);

  const std::map<std::string, std::pair<lf_subcommand, std::string>> commands{
      {"simulate", {LF_CMD_SIMULATE, "Simulate paths for every n and seed; write event logs and path summaries"}},
      {"fluid", {LF_CMD_FLUID, "Solve the fluid equation; write the solution and its regime intervals"}},
      {"compare", {LF_CMD_COMPARE, "Compare simulated paths with the fluid limit; write error tables and overlays"}},
      {"blocked", {LF_CMD_BLOCKED, "Write blocked-arrival and congestion-ratio series, simulated and fluid"}},
  };

  std::string config_file;
  std::string out_flag;
  bool plot_data = false;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("config", config_file, "YAML configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_flag, "Output directory");
    sub->add_flag("--emit-plot-data", plot_data, "Also write two-column gnuplot data files");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  const lf_subcommand command = commands.at(name).first;

  lf_config* raw = nullptr;
  if (lf_status st = lf_config_load(config_file.c_str(), &raw); st != LF_OK) return report(st, config_file);
  std::unique_ptr<lf_config, ConfigDeleter> config(raw);

  const std::string dir = output_dir(out_flag, config.get());
  char* summary = nullptr;
  if (lf_status st = lf_run(config.get(), command, dir.c_str(), plot_data ? 1 : 0, &summary); st != LF_OK) {
    return report(st, name + " " + config_file);
  }
  std::cout << name << ": wrote results to " << dir << '\n' << summary << '\n';
  lf_string_free(summary);
  return 0;
}
