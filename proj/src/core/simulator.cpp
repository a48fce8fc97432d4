#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "errors.hpp"

namespace lossfluid {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ArrivalAdmitted:
      return "arrival-admitted";
    case EventKind::ArrivalBlocked:
      return "arrival-blocked";
    case EventKind::Departure:
      return "departure";
  }
  return "unknown";
}

std::vector<double> sample_arrivals(const Intensity& intensity, int n, double horizon, RandomStream& rng) {
  std::vector<double> epochs;
  if (intensity.identically_zero()) return epochs;
  const auto cuts = intensity.thinning_partition(horizon);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double bound = n * intensity.upper_bound(lo, hi);
    if (bound <= 0.0) continue;
    double t = lo;
    while (true) {
      t -= std::log(rng.uniform()) / bound;
      if (t >= hi) break;
      if (rng.uniform() * bound <= n * intensity.rate(t)) epochs.push_back(t);
    }
  }
  return epochs;
}

SimPath simulate(const ModelConfig& config, std::uint64_t seed) {
  RandomStream arrival_rng(seed, Substream::Arrivals);
  RandomStream mark_rng(seed, Substream::Marks);
  RandomStream initial_rng(seed, Substream::InitialRemaining);

  const auto arrivals = sample_arrivals(config.intensity(), config.capacity(), config.horizon(), arrival_rng);
  std::vector<double> marks(arrivals.size());
  for (double& s : marks) s = config.service().sample(mark_rng);
  std::vector<double> initial(static_cast<std::size_t>(config.initial_count()));
  for (double& s : initial) s = config.initial_service().sample(initial_rng);

  return simulate_marked(config, arrivals, marks, initial, seed);
}

SimPath simulate_marked(const ModelConfig& config, std::span<const double> arrivals, std::span<const double> marks,
                        std::span<const double> initial_remaining, std::uint64_t seed) {
  if (marks.size() != arrivals.size()) throw DomainError("simulate: need one service mark per arrival");
  if (static_cast<int>(initial_remaining.size()) != config.initial_count()) {
    throw DomainError("simulate: initial remaining times must number round(r0 * n)");
  }
  const int n = config.capacity();
  const double horizon = config.horizon();

  SimPath path;
  path.capacity_ = n;
  path.seed_ = seed;
  path.horizon_ = horizon;
  path.initial_count_ = config.initial_count();
  path.arrival_count_ = arrivals.size();
  path.initial_remaining_.assign(initial_remaining.begin(), initial_remaining.end());

  // (departure time, job id); earliest first, ids break ties.
  using Pending = std::pair<double, std::int64_t>;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> departures;
  for (std::size_t i = 0; i < initial_remaining.size(); ++i) {
    departures.emplace(initial_remaining[i], static_cast<std::int64_t>(i));
  }
  int busy = path.initial_count_;

  auto release_until = [&](double t) {
    while (!departures.empty() && departures.top().first <= t) {
      const auto [when, id] = departures.top();
      departures.pop();
      --busy;
      if (when <= horizon) path.events_.push_back({when, EventKind::Departure, id, busy});
    }
  };

  std::int64_t next_id = path.initial_count_;
  double last = -1.0;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const double u = arrivals[i];
    if (!(u > last) || u > horizon) throw DomainError("simulate: arrival epochs must increase within [0, T]");
    last = u;
    // Departures at the same instant free their server first.
    release_until(u);
    const std::int64_t id = next_id++;
    if (busy < n) {
      ++busy;
      departures.emplace(u + marks[i], id);
      path.admitted_.push_back({id, u, marks[i]});
      path.events_.push_back({u, EventKind::ArrivalAdmitted, id, busy});
    } else {
      path.events_.push_back({u, EventKind::ArrivalBlocked, id, busy});
    }
  }
  release_until(horizon);
  path.index();
  return path;
}

void SimPath::index() {
  times_.resize(events_.size());
  area_.resize(events_.size());
  blocked_times_.clear();
  double area = 0.0;
  double prev_time = 0.0;
  int prev_count = initial_count_;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    area += static_cast<double>(prev_count) * (e.time - prev_time) / capacity_;
    times_[i] = e.time;
    area_[i] = area;
    prev_time = e.time;
    prev_count = e.occupied;
    if (e.kind == EventKind::ArrivalBlocked) blocked_times_.push_back(e.time);
  }
}

void SimPath::check_time(double t, const char* op) const {
  if (std::isnan(t) || t < 0.0 || t > horizon_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "path::" << op << ": t=" << t << " outside the horizon [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
}

int SimPath::occupied_at(double t) const {
  check_time(t, "occupied_at");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_count_;
  return events_[static_cast<std::size_t>(it - times_.begin()) - 1].occupied;
}

int SimPath::occupied_before(double t) const {
  check_time(t, "occupied_before");
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_count_;
  return events_[static_cast<std::size_t>(it - times_.begin()) - 1].occupied;
}

double SimPath::occupancy_at(double t) const { return static_cast<double>(occupied_at(t)) / capacity_; }

double SimPath::integrated(double t) const {
  check_time(t, "integrated");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return static_cast<double>(initial_count_) * t / capacity_;
  const auto i = static_cast<std::size_t>(it - times_.begin()) - 1;
  return area_[i] + static_cast<double>(events_[i].occupied) * (t - times_[i]) / capacity_;
}

double SimPath::blocked_fraction(double t) const {
  check_time(t, "blocked_fraction");
  const auto count = std::upper_bound(blocked_times_.begin(), blocked_times_.end(), t) - blocked_times_.begin();
  return static_cast<double>(count) / capacity_;
}

std::vector<std::pair<double, double>> SimPath::free_intervals(double t) const {
  check_time(t, "free_intervals");
  std::vector<std::pair<double, double>> out;
  auto add = [&out](double a, double b) {
    if (!(a < b)) return;
    if (!out.empty() && out.back().second == a) {
      out.back().second = b;
    } else {
      out.emplace_back(a, b);
    }
  };
  double start = 0.0;
  int count = initial_count_;
  for (const Event& e : events_) {
    if (e.time >= t) break;
    if (count < capacity_) add(start, e.time);
    start = e.time;
    count = e.occupied;
  }
  if (count < capacity_) add(start, t);
  return out;
}

double martingale_residual(const SimPath& path, const ModelConfig& config, double t) {
  const double times[] = {t};
  return martingale_residuals(path, config, times).front();
}

std::vector<double> martingale_residuals(const SimPath& path, const ModelConfig& config,
                                         std::span<const double> times) {
  if (config.r0() != 0.0) {
    throw UnsupportedConfiguration("martingale_residual: only defined for the empty start r0 = 0");
  }
  if (path.horizon() != config.horizon() || path.capacity() != config.capacity()) {
    throw DomainError("martingale_residual: path was not simulated from this configuration");
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    config.check_time(t, "martingale_residual");
    double compensator = 0.0;
    for (const auto& [a, b] : path.free_intervals(t)) {
      compensator += surviving_mass(config.intensity(), config.service(), t, a, b);
    }
    out.push_back(path.occupancy_at(t) - compensator);
  }
  return out;
}

}  // namespace lossfluid
