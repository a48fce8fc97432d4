#include "fluid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace lossfluid {

namespace {

// Admission decisions closer than this to the capacity line are treated as exact.
constexpr double kCapacitySlack = 1e-12;
// w below 1 - kThrottle counts as throttled admission.
constexpr double kThrottle = 1e-9;

struct Mesh {
  std::size_t cells;
  double step;
  std::vector<double> times;
};

Mesh make_mesh(const ModelConfig& config, double h) {
  const double horizon = config.horizon();
  if (!std::isfinite(h) || !(h > 0.0) || h > horizon / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "fluid: step h=" << h << " outside (0, T/10] with T=" << horizon;
    throw DomainError(msg.str());
  }
  const auto cells = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
  Mesh mesh{cells, horizon / static_cast<double>(cells), std::vector<double>(cells + 1)};
  for (std::size_t k = 0; k <= cells; ++k) {
    mesh.times[k] = horizon * static_cast<double>(k) / static_cast<double>(cells);
  }
  return mesh;
}

// Shared forward stepper. choose_w(k, base, increment) returns the admission
// fraction for cell k given the mass already committed at t_{k+1} and the mass
// full admission on cell k would add.
template <typename Choose>
FluidSolution step_forward(const ModelConfig& config, double h, FluidScheme scheme, double width, Choose choose_w) {
  Mesh mesh = make_mesh(config, h);
  const std::size_t cells = mesh.cells;
  const double step = mesh.step;

  FluidSolution sol{config, scheme, step, width, std::move(mesh.times), {}, {}, {}, {}, {}, {}};
  const auto& times = sol.times;
  sol.rho.assign(cells + 1, 0.0);
  sol.w.assign(cells + 1, 1.0);
  sol.lambda.resize(cells + 1);
  sol.admitted.assign(cells + 1, 0.0);

  // The kernel only depends on the lag, which is itself a mesh time.
  std::vector<double> kernel(cells + 1);
  std::vector<double> initial(cells + 1);
  for (std::size_t m = 0; m <= cells; ++m) {
    kernel[m] = config.service().survival(times[m]);
    initial[m] = config.r0() * config.initial_service().survival(times[m]);
    sol.lambda[m] = config.intensity().rate(times[m]);
  }

  sol.rho[0] = config.r0();
  for (std::size_t k = 0; k < cells; ++k) {
    double committed = 0.0;
    for (std::size_t j = 0; j < k; ++j) committed += sol.admitted[j] * kernel[k + 1 - j];
    const double base = initial[k + 1] + step * committed;
    const double increment = step * sol.lambda[k] * kernel[1];
    const double w = choose_w(k, base, increment, sol.rho[k]);
    sol.w[k] = w;
    sol.admitted[k] = w * sol.lambda[k];
    sol.rho[k + 1] = std::clamp(base + w * increment, 0.0, 1.0);
  }
  sol.w[cells] = sol.w[cells - 1];
  sol.admitted[cells] = sol.w[cells] * sol.lambda[cells];

  sol.theta.assign(cells + 1, 0.0);
  sol.blocked.assign(cells + 1, 0.0);
  for (std::size_t k = 0; k < cells; ++k) {
    sol.theta[k + 1] = sol.theta[k] + 0.5 * step * (sol.rho[k] + sol.rho[k + 1]);
    sol.blocked[k + 1] = sol.blocked[k] + step * (1.0 - sol.w[k]) * sol.lambda[k];
  }
  return sol;
}

std::size_t cell_of(const FluidSolution& sol, double t) {
  const auto k = static_cast<std::size_t>(t / sol.step);
  return std::min(k, sol.cells() - 1);
}

void check_time(const FluidSolution& sol, double t, const char* op) { sol.config.check_time(t, op); }

}  // namespace

double FluidSolution::rho_at(double t) const {
  config.check_time(t, "fluid::rho_at");
  const std::size_t k = cell_of(*this, t);
  const double frac = std::clamp((t - times[k]) / step, 0.0, 1.0);
  return rho[k] + frac * (rho[k + 1] - rho[k]);
}

double default_step(const ModelConfig& config) { return config.horizon() / kDefaultMeshDivisions; }

FluidSolution solve(const ModelConfig& config, double h) {
  return step_forward(config, h, FluidScheme::Strict, 0.0,
                      [](std::size_t, double base, double increment, double) -> double {
                        if (base + increment <= 1.0 + kCapacitySlack) return 1.0;
                        if (base >= 1.0 - kCapacitySlack) return 0.0;
                        return std::clamp((1.0 - base) / increment, 0.0, 1.0);
                      });
}

double smooth_indicator(double d, double x) {
  const double lo = 1.0 - 2.0 * d / 3.0;
  const double hi = 1.0 - d / 3.0;
  if (x <= lo) return 1.0;
  if (x >= hi) return 0.0;
  const double z = (x - lo) / (hi - lo);
  return 1.0 - z * z * (3.0 - 2.0 * z);
}

double lower_indicator(double d, double x) { return x <= 1.0 - d ? 1.0 : 0.0; }

FluidSolution solve_mollified(const ModelConfig& config, double h, double d) {
  if (!std::isfinite(d) || !(d > 0.0) || !(d < 1.0)) {
    throw DomainError("fluid: mollifier width d must lie in (0, 1)");
  }
  return step_forward(config, h, FluidScheme::Mollified, d,
                      [d](std::size_t, double, double, double rho_left) { return smooth_indicator(d, rho_left); });
}

double RegimeIntervals::sigma0() const {
  if (intervals.empty() || !intervals.front().pinned) return 0.0;
  const double end = intervals.front().end;
  return end >= horizon ? std::numeric_limits<double>::infinity() : end;
}

std::vector<double> RegimeIntervals::hitting_times() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].pinned && i > 0) out.push_back(intervals[i].start);
  }
  return out;
}

std::vector<double> RegimeIntervals::exit_times() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].pinned && i > 0) {
      out.push_back(intervals[i].end >= horizon ? std::numeric_limits<double>::infinity() : intervals[i].end);
    }
  }
  return out;
}

std::vector<std::pair<double, double>> RegimeIntervals::admitting_set(double t) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : intervals) {
    if (iv.pinned || iv.start >= t) continue;
    out.emplace_back(iv.start, std::min(iv.end, t));
  }
  return out;
}

RegimeIntervals regimes(const FluidSolution& sol, double tol_pin) {
  if (!(tol_pin > 0.0 && tol_pin <= 0.1)) throw DomainError("regimes: tol_pin must lie in (0, 0.1]");
  RegimeIntervals out;
  out.tol_pin = tol_pin;
  out.horizon = sol.horizon();
  const std::size_t cells = sol.cells();
  // With no arrivals on a cell nothing can be throttled; there the level alone decides.
  auto pinned = [&](std::size_t k) {
    const bool throttled = 1.0 - sol.w[k] > kThrottle || sol.lambda[k] == 0.0;
    return throttled && sol.rho[k + 1] >= 1.0 - tol_pin;
  };

  // Where rho rises into 1 inside cell k, locate the crossing on the interpolant.
  auto entry_time = [&](std::size_t k) {
    const double level = std::min(1.0 - kThrottle, sol.rho[k + 1]);
    if (sol.rho[k] >= level) return sol.times[k];
    double lo = sol.times[k];
    double hi = sol.times[k + 1];
    while (hi - lo > sol.step / 100.0) {
      const double mid = 0.5 * (lo + hi);
      (sol.rho_at(mid) >= level ? hi : lo) = mid;
    }
    return hi;
  };

  std::size_t k = 0;
  double start = 0.0;
  while (k < cells) {
    const bool state = pinned(k);
    std::size_t next = k;
    while (next < cells && pinned(next) == state) ++next;
    double end = sol.horizon();
    if (next < cells) end = state ? sol.times[next] : entry_time(next);
    if (end > start) out.intervals.push_back({start, end, state});
    start = end;
    k = next;
  }
  return out;
}

double reconstruct_from_regimes(const RegimeIntervals& reg, const ModelConfig& config, double t) {
  config.check_time(t, "reconstruct_from_regimes");
  double rho = config.r0() * config.initial_service().survival(t);
  for (const auto& [a, b] : reg.admitting_set(t)) {
    rho += surviving_mass(config.intensity(), config.service(), t, a, b);
  }
  return rho;
}

double fluid_integrated(const FluidSolution& sol, double t) {
  check_time(sol, t, "fluid_integrated");
  const std::size_t k = cell_of(sol, t);
  const double dt = t - sol.times[k];
  return sol.theta[k] + 0.5 * dt * (sol.rho[k] + sol.rho_at(t));
}

double fluid_integrated_explicit(const FluidSolution& sol, double t) {
  check_time(sol, t, "fluid_integrated_explicit");
  const auto& config = sol.config;
  double theta = config.r0() * config.initial_service().truncated_mean(t);
  for (std::size_t j = 0; j < sol.cells() && sol.times[j] < t; ++j) {
    if (sol.admitted[j] == 0.0) continue;
    const double width = std::min(sol.step, t - sol.times[j]);
    theta += sol.admitted[j] * width * config.service().truncated_mean(t - sol.times[j]);
  }
  return theta;
}

double fluid_blocked(const FluidSolution& sol, double t) {
  check_time(sol, t, "fluid_blocked");
  const std::size_t k = cell_of(sol, t);
  return sol.blocked[k] + (1.0 - sol.w[k]) * sol.lambda[k] * std::max(0.0, t - sol.times[k]);
}

double fluid_blocked_indicator(const FluidSolution& sol, double t, double tol) {
  check_time(sol, t, "fluid_blocked_indicator");
  double mass = 0.0;
  for (std::size_t j = 0; j < sol.cells() && sol.times[j] < t; ++j) {
    if (sol.rho[j] >= 1.0 - tol) mass += sol.lambda[j] * std::min(sol.step, t - sol.times[j]);
  }
  return mass;
}

}  // namespace lossfluid
