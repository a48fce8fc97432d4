#include "runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "fluid.hpp"
#include "harness.hpp"
#include "observables.hpp"
#include "simulator.hpp"

namespace lossfluid {

namespace {

namespace fs = std::filesystem;

std::string tagged(std::string_view stem, int n, std::uint64_t seed, std::string_view ext) {
  std::ostringstream name;
  name << stem << "_n" << n << "_seed" << seed << ext;
  return name.str();
}

std::string tagged(std::string_view stem, int n, std::string_view ext) {
  std::ostringstream name;
  name << stem << "_n" << n << ext;
  return name.str();
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
  }

  fs::path add(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }

  [[nodiscard]] const fs::path& dir() const { return dir_; }
  std::vector<fs::path> take() { return std::move(files_); }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

std::vector<double> column(const OverlaySeries& s, std::vector<double> OverlaySeries::*field) { return s.*field; }

RunReport run_simulate(const RunConfig& cfg, const RunOptions& opt, Outputs& out) {
  struct Job {
    int n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int n : cfg.n_list) {
    for (int r = 0; r < cfg.reps; ++r) jobs.push_back({n, cfg.base_seed + static_cast<std::uint64_t>(r)});
  }
  std::vector<std::optional<SimPath>> paths(jobs.size());
  parallel_for(jobs.size(), opt.threads,
               [&](std::size_t i) { paths[i] = simulate(cfg.model.with_capacity(jobs[i].n), jobs[i].seed); });

  const auto grid = uniform_grid(cfg.model.horizon(), cfg.grid_points);
  std::ostringstream summary;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    write_events_csv(out.add(tagged("events", jobs[i].n, jobs[i].seed, ".csv")), *paths[i]);
    write_path_csv(out.add(tagged("path", jobs[i].n, jobs[i].seed, ".csv")), *paths[i], grid);
    if (opt.emit_plot_data) {
      std::vector<double> rho_n;
      for (double t : grid) rho_n.push_back(paths[i]->occupancy_at(t));
      write_plot_data(out.add(tagged("plot_rho", jobs[i].n, jobs[i].seed, ".dat")), "rho_n", grid, rho_n);
    }
  }
  summary << "simulated " << jobs.size() << " paths";
  return {out.take(), summary.str()};
}

RunReport run_fluid(const RunConfig& cfg, const RunOptions& opt, Outputs& out) {
  const FluidSolution sol = solve(cfg.model, cfg.step);
  const RegimeIntervals reg = regimes(sol, cfg.tol_pin);
  write_fluid_csv(out.add("fluid.csv"), sol);
  write_regimes_csv(out.add("regimes.csv"), reg);
  if (cfg.mollifier) {
    write_fluid_csv(out.add("fluid_mollified.csv"), solve_mollified(cfg.model, cfg.step, *cfg.mollifier));
  }
  if (opt.emit_plot_data) write_plot_data(out.add("plot_rho.dat"), "rho", sol.times, sol.rho);

  std::ostringstream summary;
  const double horizon = cfg.model.horizon();
  summary << "rho(T)=" << sol.rho.back() << " theta(T)=" << sol.theta.back() << " b(T)=" << sol.blocked.back()
          << " pinned intervals=" << reg.hitting_times().size() << " (T=" << horizon << ", h=" << sol.step << ")";
  return {out.take(), summary.str()};
}

RunReport run_compare(const RunConfig& cfg, const RunOptions& opt, Outputs& out) {
  const FluidSolution sol = solve(cfg.model, cfg.step);
  ExperimentOptions eo;
  eo.step = cfg.step;
  eo.grid_points = cfg.grid_points;
  eo.threads = opt.threads;
  const ErrorTable table = convergence_experiment(cfg.model, sol, cfg.n_list, cfg.reps, cfg.base_seed, eo);
  write_error_table_csv(out.add("error_table.csv"), table);
  write_error_summary_csv(out.add("error_summary.csv"), table);

  const auto grid = uniform_grid(cfg.model.horizon(), cfg.grid_points);
  for (int n : cfg.n_list) {
    const SimPath path = simulate(cfg.model.with_capacity(n), cfg.base_seed);
    const OverlaySeries overlay = align(path, sol, grid);
    write_overlay_csv(out.add(tagged("overlay", n, ".csv")), overlay);
    if (opt.emit_plot_data) {
      write_plot_data(out.add(tagged("plot_rho_n", n, ".dat")), "rho_n", overlay.time, column(overlay, &OverlaySeries::rho_n));
    }
  }
  if (opt.emit_plot_data) write_plot_data(out.add("plot_rho.dat"), "rho", sol.times, sol.rho);

  std::ostringstream summary;
  if (cfg.model.r0() == 0.0 && cfg.residual_reps >= 100) {
    const int n = cfg.n_list.back();
    const ResidualTable residual =
        residual_moment_check(cfg.model, n, cfg.residual_reps, cfg.base_seed, cfg.residual_points, opt.threads);
    write_residual_csv(out.add(tagged("residual", n, ".csv")), residual);
    summary << "residual n=" << n << " max E[X^2]/(Lambda/n)=" << residual.max_ratio << "\n";
  }
  for (const ErrorSummary& s : table.summaries) {
    summary << "n=" << s.n << " median sup|rho^n-rho|=" << s.rho.median << " median sup|theta^n-theta|="
            << s.theta.median << " median sup|b^n-b|=" << s.b.median << "\n";
  }
  return {out.take(), summary.str()};
}

RunReport run_blocked(const RunConfig& cfg, const RunOptions& opt, Outputs& out) {
  const FluidSolution sol = solve(cfg.model, cfg.step);
  const auto grid = uniform_grid(cfg.model.horizon(), cfg.grid_points);
  std::vector<std::optional<SimPath>> paths(cfg.n_list.size());
  parallel_for(paths.size(), opt.threads,
               [&](std::size_t i) { paths[i] = simulate(cfg.model.with_capacity(cfg.n_list[i]), cfg.base_seed); });

  write_fluid_blocked_csv(out.add("blocked_fluid.csv"), sol, grid);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    write_blocked_csv(out.add(tagged("blocked", cfg.n_list[i], ".csv")), *paths[i], sol, grid);
  }
  if (opt.emit_plot_data) {
    std::vector<double> b;
    for (double t : grid) b.push_back(fluid_blocked(sol, t));
    write_plot_data(out.add("plot_b.dat"), "b", grid, b);
  }

  const double horizon = cfg.model.horizon();
  std::ostringstream summary;
  summary << "b(T)=" << fluid_blocked(sol, horizon);
  if (cfg.model.intensity().cumulative(horizon) > 0.0) {
    summary << " congestion ratio b(T)/Lambda(T)=" << congestion_ratio(sol, cfg.model.intensity(), horizon);
  }
  return {out.take(), summary.str()};
}

void write_manifest(const fs::path& file, Subcommand command, const RunConfig& cfg, const RunReport& report) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  static const char* names[] = {"simulate", "fluid", "compare", "blocked"};
  out << "generated " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
  out << "command " << names[static_cast<int>(command)] << '\n';
  out << "config " << cfg.source.string() << '\n';
  out << "model " << cfg.model.describe() << '\n';
  out << "step " << format_number(cfg.step) << " tol_pin " << format_number(cfg.tol_pin) << '\n';
  for (const auto& f : report.files) out << "file " << f.filename().string() << '\n';
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  if (name == "simulate") return Subcommand::Simulate;
  if (name == "fluid") return Subcommand::Fluid;
  if (name == "compare") return Subcommand::Compare;
  if (name == "blocked") return Subcommand::Blocked;
  return std::nullopt;
}

RunReport run(Subcommand command, const RunConfig& config, const RunOptions& options) {
  Outputs out(options.output_dir.empty() ? fs::path(".") : options.output_dir);
  RunReport report;
  switch (command) {
    case Subcommand::Simulate:
      report = run_simulate(config, options, out);
      break;
    case Subcommand::Fluid:
      report = run_fluid(config, options, out);
      break;
    case Subcommand::Compare:
      report = run_compare(config, options, out);
      break;
    case Subcommand::Blocked:
      report = run_blocked(config, options, out);
      break;
  }
  write_manifest(out.dir() / "manifest.txt", command, config, report);
  return report;
}

}  // namespace lossfluid
