#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "fluid.hpp"
#include "simulator.hpp"

namespace lossfluid {

struct SupErrors {
  double rho = 0.0;
  double theta = 0.0;
  double b = 0.0;
};

// Uniform distance between the simulated and fluid paths, evaluated on
// grid U fluid mesh U event times, using both sides of every jump of the path.
SupErrors sup_errors(const SimPath& path, const FluidSolution& sol, std::span<const double> grid);
double sup_error(const SimPath& path, const FluidSolution& sol, std::span<const double> grid);

struct ErrorRow {
  int n;
  std::uint64_t seed;
  double sup_err_rho;
  double sup_err_theta;
  double sup_err_b;
  double max_residual_sq_over_bound;  // NaN unless r0 = 0
};

struct Quartiles {
  double q1;
  double median;
  double q3;
};

struct ErrorSummary {
  int n;
  std::size_t reps;
  Quartiles rho;
  Quartiles theta;
  Quartiles b;
  Quartiles residual;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::vector<ErrorSummary> summaries;

  [[nodiscard]] const ErrorSummary& summary(int n) const;
};

// Sample quartiles with linear interpolation between order statistics. NaNs are skipped.
Quartiles quartiles(std::vector<double> values);

struct ExperimentOptions {
  double step = 0.0;                  // fluid step; 0 means T / 4000
  std::size_t grid_points = 400;      // uniform grid added to the sup-error mesh
  std::size_t residual_points = 20;   // grid for the per-replication residual ratio
  bool residuals = true;
  unsigned threads = 0;               // 0 means hardware concurrency
};

// Simulates reps replications (seeds base_seed + i) for every n and compares
// each with one shared fluid solution. n_list must be increasing and reps >= 10.
ErrorTable convergence_experiment(const ModelConfig& config, std::span<const int> n_list, int reps,
                                  std::uint64_t base_seed, const ExperimentOptions& options = {});
ErrorTable convergence_experiment(const ModelConfig& config, const FluidSolution& sol, std::span<const int> n_list,
                                  int reps, std::uint64_t base_seed, const ExperimentOptions& options = {});

struct ResidualRow {
  double time;
  double mean_sq;  // empirical E[(X^n_t)^2]
  double bound;    // Lambda(t) / n
  double ratio;    // mean_sq / bound, 0 where both vanish
};

struct ResidualTable {
  int n = 0;
  int reps = 0;
  std::vector<ResidualRow> rows;
  double max_ratio = 0.0;
};

// Empirical second moment of the residual X^n on t_i = T i / grid_points,
// i = 1..grid_points. Requires r0 = 0 and reps >= 100.
ResidualTable residual_moment_check(const ModelConfig& config, int n, int reps, std::uint64_t base_seed,
                                    std::size_t grid_points = 40, unsigned threads = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lossfluid
