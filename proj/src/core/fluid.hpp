#pragma once

#include <limits>
#include <vector>

#include "model.hpp"

namespace lossfluid {

enum class FluidScheme {
  Strict,
  Mollified,
};

/// Mesh solution of
///   rho_t = r0 * Gbar(t) + int_0^t w(u) * Fbar(t - u) * lambda_u du
/// on t_k = k h, k = 0..N, with w the admission fraction.
///
/// Cell k is [t_k, t_{k+1}); admitted[k] = w[k] * lambda(t_k) is the admitted
/// density on that cell. w has N+1 entries; the last one repeats w[N-1].
struct FluidSolution {
  ModelConfig config;
  FluidScheme scheme = FluidScheme::Strict;
  double step = 0.0;
  double mollifier_width = 0.0;  // 0 for the strict scheme
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<double> w;
  std::vector<double> lambda;
  std::vector<double> admitted;
  std::vector<double> theta;    // trapezoid integral of rho at each mesh point
  std::vector<double> blocked;  // b at each mesh point

  [[nodiscard]] std::size_t cells() const { return times.size() - 1; }
  [[nodiscard]] double horizon() const { return times.back(); }

  // Linear interpolant of the mesh values.
  [[nodiscard]] double rho_at(double t) const;
};

inline constexpr double kDefaultMeshDivisions = 4000.0;

// Default step T / 4000.
double default_step(const ModelConfig& config);

// Projected forward stepping: full admission unless that would push rho past
// 1, in which case w is the fraction that lands rho exactly on 1 (0 if the
// already-admitted mass alone keeps rho at 1). Requires 0 < h <= T/10; the
// step is shrunk to T / ceil(T/h) so the mesh ends at T.
FluidSolution solve(const ModelConfig& config, double h);

// Smooth surrogate 1^d(x): 1 for x <= 1 - 2d/3, 0 for x >= 1 - d/3, cubic
// smoothstep in between.
double smooth_indicator(double d, double x);
// 1 for x <= 1 - d, 0 above.
double lower_indicator(double d, double x);

// Forward stepping with w_k = smooth_indicator(d, rho(t_k)). d in (0, 1).
FluidSolution solve_mollified(const ModelConfig& config, double h, double d);

struct RegimeInterval {
  double start;
  double end;
  bool pinned;
};

/// Alternating below-capacity / pinned intervals covering [0, T].
///
/// Pinned intervals are [tau_k, sigma_k); below-capacity intervals are
/// [sigma_{k-1}, tau_k). When the solution starts below 1, sigma_0 = 0.
struct RegimeIntervals {
  double tol_pin = 0.0;
  double horizon = 0.0;
  std::vector<RegimeInterval> intervals;

  // sigma_0: 0 when starting below capacity, else end of the initial pinned interval.
  [[nodiscard]] double sigma0() const;
  // tau_k for k >= 1 (hitting times of 1), in order.
  [[nodiscard]] std::vector<double> hitting_times() const;
  // sigma_k for k >= 1 matching hitting_times(); +inf when not exited by T.
  [[nodiscard]] std::vector<double> exit_times() const;
  // J_t: below-capacity intervals clipped to [0, t].
  [[nodiscard]] std::vector<std::pair<double, double>> admitting_set(double t) const;
};

// A cell is pinned when admission is throttled (w < 1, or no arrivals at all)
// and rho at its right end is within tol_pin of 1. tol_pin in (0, 0.1]. Boundaries where rho crosses into 1 are refined by
// bisection on the linear interpolant.
RegimeIntervals regimes(const FluidSolution& sol, double tol_pin);

// rho_t = r0 Gbar(t) + int_{J_t} Fbar(t - u) lambda_u du by adaptive quadrature.
double reconstruct_from_regimes(const RegimeIntervals& reg, const ModelConfig& config, double t);

// Theta_t = int_0^t rho_u du (trapezoid on the mesh).
double fluid_integrated(const FluidSolution& sol, double t);
// r0 E[min(S0, t)] + sum_j w_j lambda_j E[min(S, t - t_j)] h over cells with t_j < t.
double fluid_integrated_explicit(const FluidSolution& sol, double t);

// b_t = int_0^t (1 - w_u) lambda_u du with w piecewise constant on cells.
double fluid_blocked(const FluidSolution& sol, double t);
// int_0^t 1{rho_u >= 1 - tol} lambda_u du with the indicator taken at the left end of each cell.
double fluid_blocked_indicator(const FluidSolution& sol, double t, double tol);

}  // namespace lossfluid
