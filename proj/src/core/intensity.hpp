#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lossfluid {

/// Deterministic arrival-rate function u -> lambda_u together with its
/// cumulative Lambda(t) = int_0^t lambda_u du.
///
/// Four shapes are supported: a constant rate, a sinusoid
/// a * (1 + m * sin(2*pi*u/p)), a right-continuous piecewise-constant rate and
/// a linearly interpolated table. Objects are immutable values; every query
/// rejects times outside [0, horizon()].
class Intensity {
 public:
  struct Constant {
    double rate;
  };
  struct Sinusoidal {
    double base;
    double amplitude;
    double period;
  };
  // rates[i] holds on [breakpoints[i], breakpoints[i+1]); the last rate extends to infinity.
  struct Piecewise {
    std::vector<double> breakpoints;
    std::vector<double> rates;
  };
  // Linear interpolation between (times[i], rates[i]); times[0] == 0.
  struct Table {
    std::vector<double> times;
    std::vector<double> rates;
    std::vector<double> cumulative;  // trapezoid mass at each node
  };

  static Intensity constant(double rate);
  static Intensity sinusoidal(double base, double amplitude, double period);
  static Intensity piecewise(std::vector<double> breakpoints, std::vector<double> rates);
  static Intensity table(std::vector<double> times, std::vector<double> rates);

  // Copy restricted to [0, horizon]. Tables must cover the horizon.
  [[nodiscard]] Intensity bounded(double horizon) const;
  [[nodiscard]] double horizon() const { return horizon_; }

  [[nodiscard]] double rate(double t) const;
  [[nodiscard]] double cumulative(double t) const;
  // Upper bound of the rate on [t0, t1]; tight for every variant.
  [[nodiscard]] double upper_bound(double t0, double t1) const;

  // Rate if it is constant on [t0, t1), nullopt otherwise.
  [[nodiscard]] std::optional<double> constant_on(double t0, double t1) const;

  // Breakpoints of [0, horizon] on which a single thinning bound is used:
  // quarter periods for the sinusoid, pieces for piecewise, table nodes for tables.
  [[nodiscard]] std::vector<double> thinning_partition(double horizon) const;

  [[nodiscard]] bool identically_zero() const;
  [[nodiscard]] std::string describe() const;

  using Variant = std::variant<Constant, Sinusoidal, Piecewise, Table>;
  [[nodiscard]] const Variant& variant() const { return shape_; }

 private:
  explicit Intensity(Variant shape) : shape_(std::move(shape)) {}
  void check_time(double t, const char* op) const;

  Variant shape_;
  double horizon_ = std::numeric_limits<double>::infinity();
};

}  // namespace lossfluid
