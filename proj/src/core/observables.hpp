#pragma once

#include <span>
#include <vector>

#include "fluid.hpp"
#include "simulator.hpp"

namespace lossfluid {

/// Simulated and fluid observables sampled on one common time grid.
/// congestion_ratio is NaN where Lambda(t) = 0.
struct OverlaySeries {
  std::vector<double> time;
  std::vector<double> rho_n;
  std::vector<double> rho;
  std::vector<double> theta_n;
  std::vector<double> theta;
  std::vector<double> b_n;
  std::vector<double> b;
  std::vector<double> congestion_ratio;
};

// b_t / Lambda_t. Throws UndefinedRatio when Lambda_t = 0.
double congestion_ratio(const FluidSolution& sol, const Intensity& intensity, double t);

// Cumulative idleness t - Theta_t.
double idleness(const FluidSolution& sol, double t);
double idleness(const SimPath& path, double t);

// Throws DomainError when the path and the solution were built for different models.
void check_compatible(const SimPath& path, const FluidSolution& sol);

// Samples every series on grid U event times of the path (within [0, T]).
OverlaySeries align(const SimPath& path, const FluidSolution& sol, std::span<const double> grid);

// t_k = T k / points, k = 0..points.
std::vector<double> uniform_grid(double horizon, std::size_t points);

}  // namespace lossfluid
