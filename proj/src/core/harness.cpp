#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "observables.hpp"

namespace lossfluid {

SupErrors sup_errors(const SimPath& path, const FluidSolution& sol, std::span<const double> grid) {
  check_compatible(path, sol);
  const double horizon = sol.horizon();
  std::vector<double> points(sol.times.begin(), sol.times.end());
  for (double t : grid) {
    if (t >= 0.0 && t <= horizon) points.push_back(t);
  }
  for (const Event& e : path.events()) points.push_back(e.time);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double n = path.capacity();
  SupErrors err;
  for (double t : points) {
    const double rho = sol.rho_at(t);
    const double b = fluid_blocked(sol, t);
    const double blocked_here = path.blocked_fraction(t);
    err.rho = std::max(err.rho, std::abs(path.occupied_at(t) / n - rho));
    err.rho = std::max(err.rho, std::abs(path.occupied_before(t) / n - rho));
    err.theta = std::max(err.theta, std::abs(path.integrated(t) - fluid_integrated(sol, t)));
    err.b = std::max(err.b, std::abs(blocked_here - b));
    if (t > 0.0) {
      // Left limit of the blocked count: drop arrivals blocked exactly at t.
      const auto events = path.events();
      std::size_t at_t = 0;
      for (auto it = std::lower_bound(events.begin(), events.end(), t,
                                      [](const Event& e, double v) { return e.time < v; });
           it != events.end() && it->time == t; ++it) {
        if (it->kind == EventKind::ArrivalBlocked) ++at_t;
      }
      err.b = std::max(err.b, std::abs(blocked_here - static_cast<double>(at_t) / n - b));
    }
  }
  return err;
}

double sup_error(const SimPath& path, const FluidSolution& sol, std::span<const double> grid) {
  return sup_errors(path, sol, grid).rho;
}

const ErrorSummary& ErrorTable::summary(int n) const {
  for (const auto& s : summaries) {
    if (s.n == n) return s;
  }
  throw DomainError("error table has no rows for n=" + std::to_string(n));
}

Quartiles quartiles(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::sort(values.begin(), values.end());
  auto at = [&values](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

ErrorTable convergence_experiment(const ModelConfig& config, std::span<const int> n_list, int reps,
                                  std::uint64_t base_seed, const ExperimentOptions& options) {
  const double h = options.step > 0.0 ? options.step : default_step(config);
  return convergence_experiment(config, solve(config, h), n_list, reps, base_seed, options);
}

ErrorTable convergence_experiment(const ModelConfig& config, const FluidSolution& sol, std::span<const int> n_list,
                                  int reps, std::uint64_t base_seed, const ExperimentOptions& options) {
  if (n_list.empty()) throw DomainError("convergence_experiment: n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] <= 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw DomainError("convergence_experiment: n_list must be positive and increasing");
    }
  }
  if (reps < 10) throw DomainError("convergence_experiment: need at least 10 replications");

  const auto grid = uniform_grid(config.horizon(), options.grid_points);
  std::vector<double> residual_grid;
  const bool residuals = options.residuals && config.r0() == 0.0;
  if (residuals) {
    residual_grid = uniform_grid(config.horizon(), options.residual_points);
    residual_grid.erase(residual_grid.begin());
  }

  ErrorTable table;
  table.rows.resize(n_list.size() * static_cast<std::size_t>(reps));
  parallel_for(table.rows.size(), options.threads, [&](std::size_t job) {
    const int n = n_list[job / static_cast<std::size_t>(reps)];
    const std::uint64_t seed = base_seed + job % static_cast<std::size_t>(reps);
    const ModelConfig model = config.with_capacity(n);
    const SimPath path = simulate(model, seed);
    const SupErrors err = sup_errors(path, sol, grid);
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (residuals) {
      residual = 0.0;
      const auto x = martingale_residuals(path, model, residual_grid);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double bound = model.intensity().cumulative(residual_grid[i]) / n;
        if (bound > 0.0) residual = std::max(residual, x[i] * x[i] / bound);
      }
    }
    table.rows[job] = {n, seed, err.rho, err.theta, err.b, residual};
  });

  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const auto first = table.rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(reps));
    const auto last = first + reps;
    auto column = [&](double ErrorRow::*field) {
      std::vector<double> values;
      for (auto it = first; it != last; ++it) values.push_back((*it).*field);
      return quartiles(std::move(values));
    };
    table.summaries.push_back({n_list[i], static_cast<std::size_t>(reps), column(&ErrorRow::sup_err_rho),
                               column(&ErrorRow::sup_err_theta), column(&ErrorRow::sup_err_b),
                               column(&ErrorRow::max_residual_sq_over_bound)});
  }
  return table;
}

ResidualTable residual_moment_check(const ModelConfig& config, int n, int reps, std::uint64_t base_seed,
                                    std::size_t grid_points, unsigned threads) {
  if (config.r0() != 0.0) {
    throw UnsupportedConfiguration("residual_moment_check: only defined for the empty start r0 = 0");
  }
  if (reps < 100) throw DomainError("residual_moment_check: need at least 100 replications");
  if (grid_points == 0) throw DomainError("residual_moment_check: grid must have at least one point");

  const ModelConfig model = config.with_capacity(n);
  auto grid = uniform_grid(config.horizon(), grid_points);
  grid.erase(grid.begin());

  std::vector<std::vector<double>> squares(static_cast<std::size_t>(reps));
  parallel_for(squares.size(), threads, [&](std::size_t rep) {
    const SimPath path = simulate(model, base_seed + rep);
    auto x = martingale_residuals(path, model, grid);
    for (double& v : x) v *= v;
    squares[rep] = std::move(x);
  });

  ResidualTable table;
  table.n = n;
  table.reps = reps;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (const auto& s : squares) sum += s[i];
    const double mean = sum / reps;
    const double bound = model.intensity().cumulative(grid[i]) / n;
    const double ratio = bound > 0.0 ? mean / bound : (mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    table.rows.push_back({grid[i], mean, bound, ratio});
    table.max_ratio = std::max(table.max_ratio, ratio);
  }
  return table;
}

}  // namespace lossfluid
