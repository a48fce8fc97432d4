#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace lossfluid {

enum class EventKind : std::uint8_t {
  ArrivalAdmitted,
  ArrivalBlocked,
  Departure,
};

const char* to_string(EventKind kind);

struct Event {
  double time;
  EventKind kind;
  std::int64_t job_id;
  int occupied;  // busy servers right after the event
};

struct AdmittedJob {
  std::int64_t id;
  double arrival;
  double service;
};

/// One realized trajectory of the loss system on [0, T].
///
/// Job ids 0..N0-1 are the jobs present at time zero; arrivals are numbered
/// N0, N0+1, ... in epoch order whether admitted or blocked. Departures after
/// T are not logged.
class SimPath {
 public:
  [[nodiscard]] int capacity() const { return capacity_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] int initial_count() const { return initial_count_; }

  [[nodiscard]] std::span<const Event> events() const { return events_; }
  [[nodiscard]] std::span<const double> initial_remaining() const { return initial_remaining_; }
  [[nodiscard]] std::span<const AdmittedJob> admitted_jobs() const { return admitted_; }
  [[nodiscard]] std::size_t arrival_count() const { return arrival_count_; }
  [[nodiscard]] std::size_t blocked_count() const { return blocked_times_.size(); }

  // Busy servers at t (right-continuous) and just before t.
  [[nodiscard]] int occupied_at(double t) const;
  [[nodiscard]] int occupied_before(double t) const;

  // rho^n_t = k(t) / n.
  [[nodiscard]] double occupancy_at(double t) const;
  // Theta^n_t = int_0^t rho^n_u du, exact.
  [[nodiscard]] double integrated(double t) const;
  // b^n_t = (number of blocked arrivals in [0, t]) / n.
  [[nodiscard]] double blocked_fraction(double t) const;

  // Maximal intervals [a, b) within [0, t] on which fewer than n servers are busy.
  [[nodiscard]] std::vector<std::pair<double, double>> free_intervals(double t) const;

 private:
  friend SimPath simulate_marked(const ModelConfig&, std::span<const double>, std::span<const double>,
                                 std::span<const double>, std::uint64_t);
  void check_time(double t, const char* op) const;
  void index();

  int capacity_ = 1;
  std::uint64_t seed_ = 0;
  double horizon_ = 0.0;
  int initial_count_ = 0;
  std::size_t arrival_count_ = 0;
  std::vector<Event> events_;
  std::vector<double> initial_remaining_;
  std::vector<AdmittedJob> admitted_;

  std::vector<double> times_;    // event times
  std::vector<double> area_;     // Theta^n at each event time
  std::vector<double> blocked_times_;
};

// Epochs of a Poisson process with intensity n * lambda_u on [0, T], by
// thinning against a per-subinterval bound. Strictly increasing.
std::vector<double> sample_arrivals(const Intensity& intensity, int n, double horizon, RandomStream& rng);

// Event-driven run of the loss system with capacity config.capacity().
// Deterministic in (config, seed).
SimPath simulate(const ModelConfig& config, std::uint64_t seed);

// Same mechanics with the randomness supplied: arrival epochs (ascending),
// one service mark per arrival (used only if admitted) and the remaining times
// of the initial jobs (size must equal config.initial_count()).
SimPath simulate_marked(const ModelConfig& config, std::span<const double> arrivals, std::span<const double> marks,
                        std::span<const double> initial_remaining, std::uint64_t seed = 0);

// X^n_t = rho^n_t - int_0^t 1{rho^n_{u-} < 1} survival(t - u) lambda_u du.
// Only defined for the empty start (r0 = 0).
double martingale_residual(const SimPath& path, const ModelConfig& config, double t);
std::vector<double> martingale_residuals(const SimPath& path, const ModelConfig& config, std::span<const double> times);

}  // namespace lossfluid
