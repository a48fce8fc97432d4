#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace lossfluid {

/// Service-time law: used for fresh arrivals (F) and for the remaining work of
/// jobs present at time zero (G).
///
/// survival(t) is P(S > t), right-continuous. truncated_mean(t) is
/// E[min(S, t)] = int_0^t survival(s) ds. All variants have closed forms for
/// both; sampling is by inverse transform of one uniform draw so a stream
/// yields the same durations on every platform.
class Lifetime {
 public:
  struct Exponential {
    double rate;
  };
  struct Deterministic {
    double value;
  };
  // log S ~ Normal(location, scale^2)
  struct Lognormal {
    double location;
    double scale;
  };
  // survival(t) = exp(-(t/scale)^shape)
  struct Weibull {
    double shape;
    double scale;
  };
  struct Empirical {
    std::vector<double> sorted;
    std::vector<double> prefix;  // prefix[i] = sum of sorted[0..i)
  };

  static Lifetime exponential(double rate);
  static Lifetime deterministic(double value);
  static Lifetime lognormal(double location, double scale);
  static Lifetime weibull(double shape, double scale);
  static Lifetime empirical(std::vector<double> samples);
  // One nonnegative duration per line; blank lines and '#' comments skipped.
  static Lifetime empirical_from_file(const std::filesystem::path& file);

  [[nodiscard]] double survival(double t) const;
  [[nodiscard]] double truncated_mean(double t) const;
  [[nodiscard]] double mean() const;
  double sample(RandomStream& rng) const;

  [[nodiscard]] std::string describe() const;

  using Variant = std::variant<Exponential, Deterministic, Lognormal, Weibull, Empirical>;
  [[nodiscard]] const Variant& variant() const { return law_; }

 private:
  explicit Lifetime(Variant law) : law_(std::move(law)) {}
  Variant law_;
};

}  // namespace lossfluid
