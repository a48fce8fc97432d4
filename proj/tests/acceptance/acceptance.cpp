// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fluid.hpp"
#include "harness.hpp"
#include "observables.hpp"
#include "simulator.hpp"

using namespace lossfluid;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

ModelConfig underload() {
  return ModelConfig::make(Intensity::constant(0.5), Lifetime::exponential(1.0), std::nullopt, 0.0, 5.0);
}

ModelConfig overload() {
  return ModelConfig::make(Intensity::constant(3.0), Lifetime::deterministic(1.0), std::nullopt, 0.0, 2.0);
}

ModelConfig sinusoidal_lognormal() {
  return ModelConfig::make(Intensity::sinusoidal(2.0 / 3.0, 1.0, 10.0), Lifetime::lognormal(-0.5, 1.0), std::nullopt,
                           0.0, 20.0);
}

double sup_diff(const FluidSolution& a, const FluidSolution& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.rho.size(); ++k) d = std::max(d, std::abs(a.rho[k] - b.rho[k]));
  return d;
}

Outcome closed_form_underload() {
  const auto start = Clock::now();
  const ModelConfig cfg = underload();
  const FluidSolution sol = solve(cfg, cfg.horizon() / 4000);
  double err = 0.0;
  for (std::size_t k = 0; k < sol.rho.size(); ++k) {
    err = std::max(err, std::abs(sol.rho[k] - 0.5 * (1.0 - std::exp(-sol.times[k]))));
  }
  const double elapsed = seconds_since(start);
  return {err <= 2e-3 && elapsed < 1.0, fmt("sup error %.3e (<= 2e-3), %.3f s (< 1 s)", err, elapsed)};
}

Outcome hand_computed_overload() {
  const auto start = Clock::now();
  const ModelConfig cfg = overload();
  const double h = default_step(cfg);
  const FluidSolution sol = solve(cfg, h);
  const RegimeIntervals reg = regimes(sol, 10 * h);
  const auto tau = reg.hitting_times();
  const auto sigma = reg.exit_times();
  if (tau.empty()) return {false, "no hitting time found"};
  const double b1 = fluid_blocked(sol, 1.0), b2 = fluid_blocked(sol, 2.0);
  const double ratio = congestion_ratio(sol, cfg.intensity(), 2.0);
  const double elapsed = seconds_since(start);
  const bool pass = std::abs(tau[0] - 1.0 / 3.0) <= 5e-3 && std::abs(sigma[0] - 1.0) <= 5e-3 &&
                    std::abs(b1 - 2.0) <= 2e-2 && std::abs(b2 - 4.0) <= 2e-2 &&
                    std::abs(ratio - 2.0 / 3.0) <= 1e-2 && elapsed < 2.0;
  return {pass, fmt("tau1=%.5f sigma1=%.5f b(1)=%.5f b(2)=%.5f ratio(T)=%.5f, %.3f s", tau[0], sigma[0], b1, b2,
                    ratio, elapsed)};
}

Outcome initial_decay() {
  const ModelConfig cfg = ModelConfig::make(Intensity::constant(0.0), Lifetime::exponential(1.0),
                                            Lifetime::exponential(1.0), 1.0, 5.0);
  const FluidSolution sol = solve(cfg, default_step(cfg));
  double err = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = 5.0 * i / 10000;
    err = std::max(err, std::abs(sol.rho_at(t) - std::exp(-t)));
  }
  return {err <= 1e-3, fmt("sup error %.3e (<= 1e-3)", err)};
}

Outcome sinusoidal_convergence() {
  const auto start = Clock::now();
  const int ns[] = {20, 200};
  const ErrorTable table = convergence_experiment(sinusoidal_lognormal(), ns, 50, 1, {.residuals = false});
  const double m20 = table.summary(20).rho.median, m200 = table.summary(200).rho.median;
  const double ratio = m20 / m200;
  const double elapsed = seconds_since(start);
  const bool pass = m200 < m20 && ratio >= 2.0 && ratio <= 5.0 && elapsed < 120.0;
  return {pass, fmt("median sup|rho^n - rho|: n=20 %.4f, n=200 %.4f, ratio %.3f (in [2, 5]), %.1f s (< 120 s)", m20,
                    m200, ratio, elapsed)};
}

Outcome residual_bound() {
  const auto start = Clock::now();
  const ResidualTable table = residual_moment_check(sinusoidal_lognormal(), 200, 200, 1, 40);
  const double elapsed = seconds_since(start);
  bool within = true;
  for (const ResidualRow& row : table.rows) within &= row.mean_sq <= 1.5 * row.bound;
  return {within && elapsed < 180.0,
          fmt("max E[X^2]/(Lambda/n) = %.3f over %zu grid points (<= 1.5), %.1f s (< 180 s)", table.max_ratio,
              table.rows.size(), elapsed)};
}

Outcome mollifier_continuation() {
  std::string detail;
  bool pass = true;
  int index = 1;
  for (const ModelConfig& cfg : {underload(), overload()}) {
    const double h = default_step(cfg);
    const FluidSolution strict = solve(cfg, h);
    double prev = INFINITY;
    detail += fmt("config %d:", index++);
    for (double d : {0.2, 0.1, 0.05, 0.025}) {
      const double diff = sup_diff(strict, solve_mollified(cfg, h, d));
      pass &= diff <= prev;
      prev = diff;
      detail += fmt(" %.4f", diff);
    }
    detail += "; ";
  }
  return {pass, detail + "nonincreasing in d"};
}

Outcome theta_and_b_convergence() {
  const int ns[] = {50, 500};
  const ErrorTable table = convergence_experiment(overload(), ns, 30, 1, {.residuals = false});
  const ErrorSummary& small = table.summary(50);
  const ErrorSummary& large = table.summary(500);
  const bool pass = large.theta.median < small.theta.median && large.b.median < small.b.median;
  return {pass, fmt("median sup|Theta^n - Theta| %.4f -> %.4f, median sup|b^n - b| %.4f -> %.4f", small.theta.median,
                    large.theta.median, small.b.median, large.b.median)};
}

// Checks every invariant of the suite on one random small configuration.
std::string invariant_violation(const ModelConfig& cfg, std::uint64_t seed) {
  const SimPath path = simulate(cfg, seed);
  const int n = cfg.capacity();
  int occupied = path.initial_count();
  std::size_t admitted = 0, blocked = 0;
  for (const Event& e : path.events()) {
    if (e.kind == EventKind::ArrivalBlocked) {
      if (occupied != n) return "blocked arrival below full occupancy";
      ++blocked;
    } else if (e.kind == EventKind::ArrivalAdmitted) {
      if (occupied >= n) return "admission at full occupancy";
      ++occupied;
      ++admitted;
    } else {
      --occupied;
    }
    if (e.occupied != occupied) return "event log occupancy out of step";
    const double rho = path.occupancy_at(e.time);
    if (rho < 0.0 || rho > 1.0) return "path left [0, 1]";
  }
  if (admitted + blocked != path.arrival_count()) return "admitted + blocked != arrivals";
  if (path.occupied_at(cfg.horizon()) != occupied) return "final occupancy mismatch";

  const double h = cfg.horizon() / 500;
  const FluidSolution sol = solve(cfg, h);
  const double tol = 10 * h;
  for (std::size_t k = 0; k + 1 < sol.rho.size(); ++k) {
    if (sol.rho[k] < 0.0 || sol.rho[k] > 1.0 || sol.w[k] < 0.0 || sol.w[k] > 1.0) return "fluid out of range";
    if ((1.0 - sol.w[k]) * (1.0 - sol.rho[k + 1]) > tol) return "admission throttled below capacity";
  }
  double theta_n = 0, b_n = 0, theta = 0, b = 0, idle = 0;
  for (int i = 0; i <= 100; ++i) {
    const double t = cfg.horizon() * i / 100;
    const double values[] = {path.integrated(t), path.blocked_fraction(t), fluid_integrated(sol, t),
                             fluid_blocked(sol, t), idleness(sol, t)};
    if (values[0] < theta_n || values[1] < b_n || values[2] < theta - 1e-12 || values[3] < b - 1e-12 ||
        values[4] < idle - 1e-12) {
      return "observable decreased";
    }
    if (values[4] > t + 1e-12) return "idleness above t";
    theta_n = values[0];
    b_n = values[1];
    theta = values[2];
    b = values[3];
    idle = values[4];
  }
  const SimPath again = simulate(cfg, seed);
  if (again.events().size() != path.events().size()) return "rerun changed the event count";
  for (std::size_t i = 0; i < path.events().size(); ++i) {
    const Event &x = path.events()[i], &y = again.events()[i];
    if (x.time != y.time || x.kind != y.kind || x.job_id != y.job_id) return "rerun changed the event log";
  }
  return {};
}

Outcome invariant_suite() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> capacity(1, 20), pick(0, 3);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double horizon = 0.5 + 4.5 * unit(gen);
    Intensity rate = Intensity::constant(0.0);
    switch (pick(gen)) {
      case 0: rate = Intensity::constant(4.0 * unit(gen)); break;
      case 1: rate = Intensity::sinusoidal(3.0 * unit(gen), 2.0 * unit(gen) - 1.0, 0.5 + 5.0 * unit(gen)); break;
      case 2: rate = Intensity::piecewise({0.0, horizon / 3, 2 * horizon / 3}, {3 * unit(gen), 5 * unit(gen), unit(gen)}); break;
      default: rate = Intensity::table({0.0, horizon / 2, horizon}, {4 * unit(gen), 4 * unit(gen), 4 * unit(gen)}); break;
    }
    Lifetime service = Lifetime::exponential(1.0);
    switch (pick(gen)) {
      case 0: service = Lifetime::exponential(0.3 + 2.0 * unit(gen)); break;
      case 1: service = Lifetime::deterministic(0.2 + 2.0 * unit(gen)); break;
      case 2: service = Lifetime::lognormal(unit(gen) - 0.5, 0.3 + unit(gen)); break;
      default: service = Lifetime::weibull(0.5 + 2.0 * unit(gen), 0.3 + unit(gen)); break;
    }
    const double r0 = unit(gen) < 0.3 ? 0.0 : unit(gen);
    const ModelConfig cfg = ModelConfig::make(rate, service, std::nullopt, r0, horizon, capacity(gen));
    const std::string problem = invariant_violation(cfg, static_cast<std::uint64_t>(trial) + 1);
    if (!problem.empty()) return {false, fmt("trial %d (%s): %s", trial, cfg.describe().c_str(), problem.c_str())};
    ++checked;
  }
  return {true, fmt("%d random configurations (n <= 20, T <= 5)", checked)};
}

Outcome mesh_uniqueness_probe() {
  const ModelConfig cfg = overload();
  const double h = default_step(cfg);
  const RegimeIntervals coarse = regimes(solve(cfg, h), 10 * h);
  const RegimeIntervals fine = regimes(solve(cfg, h / 3), 10 * h / 3);
  if (coarse.hitting_times().empty() || fine.hitting_times().empty()) return {false, "no hitting time found"};
  const double dtau = std::abs(coarse.hitting_times()[0] - fine.hitting_times()[0]);
  const double dsigma = std::abs(coarse.exit_times()[0] - fine.exit_times()[0]);
  return {dtau <= 10 * h && dsigma <= 10 * h,
          fmt("|tau1 diff| %.2e, |sigma1 diff| %.2e (<= 10h = %.2e)", dtau, dsigma, 10 * h)};
}

}  // namespace

int main(int argc, char** argv) {
  // An optional argument selects a single criterion (1-based).
  const std::size_t only = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 0;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form underload", closed_form_underload},
      {"hand-computed overload", hand_computed_overload},
      {"initial decay", initial_decay},
      {"sinusoidal/lognormal convergence", sinusoidal_convergence},
      {"residual second-moment bound", residual_bound},
      {"mollifier continuation", mollifier_continuation},
      {"Theta and b convergence", theta_and_b_convergence},
      {"invariant suite", invariant_suite},
      {"mesh/uniqueness probe", mesh_uniqueness_probe},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s criterion %zu (%s): %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
