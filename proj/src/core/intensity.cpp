#include "intensity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace lossfluid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string("intensity: ") + what + " must be finite and >= 0");
  }
}

void require_increasing_from_zero(const std::vector<double>& xs, const char* what) {
  if (xs.empty() || xs.front() != 0.0) {
    throw ValidationError(std::string("intensity: ") + what + " must start at 0");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !(xs[i] > xs[i - 1])) {
      throw ValidationError(std::string("intensity: ") + what + " must be strictly increasing");
    }
  }
}

// Index i with xs[i] <= t < xs[i+1], clamped to [0, size-1].
std::size_t segment_of(const std::vector<double>& xs, double t) {
  auto it = std::upper_bound(xs.begin(), xs.end(), t);
  if (it == xs.begin()) return 0;
  return static_cast<std::size_t>(std::distance(xs.begin(), it)) - 1;
}

double sinusoid_rate(const Intensity::Sinusoidal& s, double t) {
  return s.base * (1.0 + s.amplitude * std::sin(kTwoPi * t / s.period));
}

}  // namespace

Intensity Intensity::constant(double rate) {
  require_finite_nonneg(rate, "constant rate");
  return Intensity(Constant{rate});
}

Intensity Intensity::sinusoidal(double base, double amplitude, double period) {
  require_finite_nonneg(base, "sinusoid base");
  if (!std::isfinite(amplitude) || std::abs(amplitude) > 1.0) {
    throw ValidationError("intensity: sinusoid amplitude must satisfy |m| <= 1");
  }
  if (!std::isfinite(period) || !(period > 0.0)) {
    throw ValidationError("intensity: sinusoid period must be > 0");
  }
  return Intensity(Sinusoidal{base, amplitude, period});
}

Intensity Intensity::piecewise(std::vector<double> breakpoints, std::vector<double> rates) {
  require_increasing_from_zero(breakpoints, "piecewise breakpoints");
  if (rates.size() != breakpoints.size()) {
    throw ValidationError("intensity: piecewise needs one rate per breakpoint");
  }
  for (double r : rates) require_finite_nonneg(r, "piecewise rate");
  return Intensity(Piecewise{std::move(breakpoints), std::move(rates)});
}

Intensity Intensity::table(std::vector<double> times, std::vector<double> rates) {
  require_increasing_from_zero(times, "table times");
  if (times.size() < 2 || rates.size() != times.size()) {
    throw ValidationError("intensity: table needs at least two (time, rate) pairs");
  }
  for (double r : rates) require_finite_nonneg(r, "table rate");
  std::vector<double> cum(times.size(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * (rates[i] + rates[i - 1]) * (times[i] - times[i - 1]);
  }
  return Intensity(Table{std::move(times), std::move(rates), std::move(cum)});
}

Intensity Intensity::bounded(double horizon) const {
  if (!std::isfinite(horizon) || !(horizon > 0.0)) {
    throw ValidationError("intensity: horizon must be finite and > 0");
  }
  if (const auto* tab = std::get_if<Table>(&shape_); tab && tab->times.back() < horizon) {
    throw ValidationError("intensity: table does not cover the horizon");
  }
  Intensity out = *this;
  out.horizon_ = horizon;
  return out;
}

void Intensity::check_time(double t, const char* op) const {
  const double slack = 1e-12 * std::max(1.0, std::isfinite(horizon_) ? horizon_ : 1.0);
  if (std::isnan(t) || t < 0.0 || t > horizon_ + slack) {
    std::ostringstream msg;
    msg << "intensity::" << op << ": t=" << t << " outside [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
  if (const auto* tab = std::get_if<Table>(&shape_); tab && t > tab->times.back() + slack) {
    throw DomainError(std::string("intensity::") + op + ": t beyond the last table node");
  }
}

double Intensity::rate(double t) const {
  check_time(t, "rate");
  return std::visit(
      [t](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          return s.rate;
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          return sinusoid_rate(s, t);
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          return s.rates[segment_of(s.breakpoints, t)];
        } else {
          const std::size_t i = segment_of(s.times, t);
          if (i + 1 >= s.times.size()) return s.rates.back();
          const double frac = (t - s.times[i]) / (s.times[i + 1] - s.times[i]);
          return s.rates[i] + frac * (s.rates[i + 1] - s.rates[i]);
        }
      },
      shape_);
}

double Intensity::cumulative(double t) const {
  check_time(t, "cumulative");
  return std::visit(
      [this, t](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          return s.rate * t;
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          const double w = kTwoPi / s.period;
          return s.base * (t + s.amplitude * (1.0 - std::cos(w * t)) / w);
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          double mass = 0.0;
          for (std::size_t i = 0; i < s.breakpoints.size() && s.breakpoints[i] < t; ++i) {
            const double end = i + 1 < s.breakpoints.size() ? std::min(t, s.breakpoints[i + 1]) : t;
            mass += s.rates[i] * (end - s.breakpoints[i]);
          }
          return mass;
        } else {
          const std::size_t i = segment_of(s.times, t);
          return s.cumulative[i] + 0.5 * (s.rates[i] + rate(t)) * (t - s.times[i]);
        }
      },
      shape_);
}

double Intensity::upper_bound(double t0, double t1) const {
  if (!(t0 < t1)) throw DomainError("intensity::upper_bound: empty interval");
  check_time(t0, "upper_bound");
  check_time(t1, "upper_bound");
  return std::visit(
      [this, t0, t1](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          return s.rate;
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          double best = std::max(sinusoid_rate(s, t0), sinusoid_rate(s, t1));
          if (s.amplitude != 0.0) {
            // Peaks of sin(2 pi u / p) sit at u = p (1/4 + k); troughs at p (3/4 + k).
            const double phase = s.amplitude > 0.0 ? 0.25 : 0.75;
            const double k = std::ceil(t0 / s.period - phase);
            if (s.period * (phase + k) <= t1) best = s.base * (1.0 + std::abs(s.amplitude));
          }
          return best;
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          const std::size_t first = segment_of(s.breakpoints, t0);
          double best = 0.0;
          for (std::size_t i = first; i < s.rates.size() && (i == first || s.breakpoints[i] <= t1); ++i) {
            best = std::max(best, s.rates[i]);
          }
          return best;
        } else {
          double best = std::max(rate(t0), rate(t1));
          for (std::size_t i = 0; i < s.times.size(); ++i) {
            if (s.times[i] > t0 && s.times[i] < t1) best = std::max(best, s.rates[i]);
          }
          return best;
        }
      },
      shape_);
}

std::optional<double> Intensity::constant_on(double t0, double t1) const {
  return std::visit(
      [t0, t1](const auto& s) -> std::optional<double> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          return s.rate;
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          if (s.amplitude == 0.0 || s.base == 0.0) return s.base;
          return std::nullopt;
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          const std::size_t i = segment_of(s.breakpoints, t0);
          if (i + 1 < s.breakpoints.size() && s.breakpoints[i + 1] < t1) return std::nullopt;
          return s.rates[i];
        } else {
          const std::size_t i = segment_of(s.times, t0);
          for (std::size_t j = i + 1; j < s.times.size(); ++j) {
            if (s.rates[j] != s.rates[i]) return std::nullopt;
            if (s.times[j] >= t1) break;
          }
          return s.rates[i];
        }
      },
      shape_);
}

std::vector<double> Intensity::thinning_partition(double horizon) const {
  std::vector<double> cuts{0.0};
  std::visit(
      [&cuts, horizon](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Sinusoidal>) {
          const double quarter = s.period / 4.0;
          for (int k = 1; k * quarter < horizon; ++k) cuts.push_back(k * quarter);
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          for (double b : s.breakpoints) {
            if (b > 0.0 && b < horizon) cuts.push_back(b);
          }
        } else if constexpr (std::is_same_v<S, Table>) {
          for (double b : s.times) {
            if (b > 0.0 && b < horizon) cuts.push_back(b);
          }
        }
      },
      shape_);
  cuts.push_back(horizon);
  return cuts;
}

bool Intensity::identically_zero() const {
  return std::visit(
      [](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          return s.rate == 0.0;
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          return s.base == 0.0;
        } else {
          return std::all_of(s.rates.begin(), s.rates.end(), [](double r) { return r == 0.0; });
        }
      },
      shape_);
}

std::string Intensity::describe() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) {
          out << "constant(" << s.rate << ")";
        } else if constexpr (std::is_same_v<S, Sinusoidal>) {
          out << "sinusoidal(base=" << s.base << ", amplitude=" << s.amplitude << ", period=" << s.period << ")";
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          out << "piecewise(" << s.rates.size() << " pieces)";
        } else {
          out << "table(" << s.times.size() << " nodes)";
        }
      },
      shape_);
  return out.str();
}

}  // namespace lossfluid
