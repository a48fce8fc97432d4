#include "observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace lossfluid {

double congestion_ratio(const FluidSolution& sol, const Intensity& intensity, double t) {
  const double offered = intensity.cumulative(t);
  if (!(offered > 0.0)) throw UndefinedRatio("congestion_ratio: Lambda(t) = 0");
  return std::clamp(fluid_blocked(sol, t) / offered, 0.0, 1.0);
}

double idleness(const FluidSolution& sol, double t) { return t - fluid_integrated(sol, t); }

double idleness(const SimPath& path, double t) { return t - path.integrated(t); }

void check_compatible(const SimPath& path, const FluidSolution& sol) {
  if (std::abs(path.horizon() - sol.horizon()) > 1e-12 * std::max(1.0, sol.horizon())) {
    throw DomainError("path and fluid solution have different horizons");
  }
  const double start = static_cast<double>(path.initial_count()) / path.capacity();
  if (std::abs(start - sol.config.r0()) > 0.5 / path.capacity() + 1e-12) {
    throw DomainError("path and fluid solution have different initial occupancy");
  }
}

OverlaySeries align(const SimPath& path, const FluidSolution& sol, std::span<const double> grid) {
  check_compatible(path, sol);
  const double horizon = sol.horizon();
  std::vector<double> times;
  times.reserve(grid.size() + path.events().size());
  for (double t : grid) {
    if (t >= 0.0 && t <= horizon) times.push_back(t);
  }
  for (const Event& e : path.events()) times.push_back(e.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const Intensity& intensity = sol.config.intensity();
  OverlaySeries out;
  out.time = times;
  for (double t : times) {
    out.rho_n.push_back(path.occupancy_at(t));
    out.rho.push_back(sol.rho_at(t));
    out.theta_n.push_back(path.integrated(t));
    out.theta.push_back(fluid_integrated(sol, t));
    out.b_n.push_back(path.blocked_fraction(t));
    out.b.push_back(fluid_blocked(sol, t));
    out.congestion_ratio.push_back(intensity.cumulative(t) > 0.0 ? congestion_ratio(sol, intensity, t)
                                                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::vector<double> uniform_grid(double horizon, std::size_t points) {
  std::vector<double> grid(points + 1);
  for (std::size_t k = 0; k <= points; ++k) {
    grid[k] = horizon * static_cast<double>(k) / static_cast<double>(points);
  }
  return grid;
}

}  // namespace lossfluid
