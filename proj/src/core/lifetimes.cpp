#include "lifetimes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace lossfluid {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ValidationError(std::string("lifetime: ") + what + " must be finite and > 0");
  }
}

void check_duration(double t, const char* op) {
  if (std::isnan(t) || t < 0.0) {
    std::ostringstream msg;
    msg << "lifetime::" << op << ": duration " << t << " is negative";
    throw DomainError(msg.str());
  }
}

const boost::math::normal_distribution<double> kStdNormal{};

// P(Z > z) for standard normal Z.
double normal_tail(double z) { return boost::math::cdf(boost::math::complement(kStdNormal, z)); }
double normal_cdf(double z) { return boost::math::cdf(kStdNormal, z); }

}  // namespace

Lifetime Lifetime::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return Lifetime(Exponential{rate});
}

Lifetime Lifetime::deterministic(double value) {
  require_positive(value, "deterministic duration");
  return Lifetime(Deterministic{value});
}

Lifetime Lifetime::lognormal(double location, double scale) {
  if (!std::isfinite(location)) throw ValidationError("lifetime: lognormal location must be finite");
  require_positive(scale, "lognormal scale");
  return Lifetime(Lognormal{location, scale});
}

Lifetime Lifetime::weibull(double shape, double scale) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  return Lifetime(Weibull{shape, scale});
}

Lifetime Lifetime::empirical(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("lifetime: empirical sample is empty");
  for (double s : samples) {
    if (!std::isfinite(s) || s < 0.0) throw ValidationError("lifetime: empirical durations must be finite and >= 0");
  }
  std::sort(samples.begin(), samples.end());
  std::vector<double> prefix(samples.size() + 1, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) prefix[i + 1] = prefix[i] + samples[i];
  return Lifetime(Empirical{std::move(samples), std::move(prefix)});
}

Lifetime Lifetime::empirical_from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open empirical lifetime file " + file.string());
  std::vector<double> samples;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double value = 0.0;
    if (!(fields >> value)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    std::string rest;
    if (fields >> rest) throw ParseError(file.string() + ":" + std::to_string(lineno) + ": expected one column");
    if (!std::isfinite(value) || value < 0.0) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": duration must be >= 0");
    }
    samples.push_back(value);
  }
  return empirical(std::move(samples));
}

double Lifetime::survival(double t) const {
  check_duration(t, "survival");
  return std::visit(
      [t](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return std::exp(-law.rate * t);
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          return t < law.value ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<L, Lognormal>) {
          if (t == 0.0) return 1.0;
          return normal_tail((std::log(t) - law.location) / law.scale);
        } else if constexpr (std::is_same_v<L, Weibull>) {
          return std::exp(-std::pow(t / law.scale, law.shape));
        } else {
          const auto above = law.sorted.end() - std::upper_bound(law.sorted.begin(), law.sorted.end(), t);
          return static_cast<double>(above) / static_cast<double>(law.sorted.size());
        }
      },
      law_);
}

double Lifetime::truncated_mean(double t) const {
  check_duration(t, "truncated_mean");
  if (t == 0.0) return 0.0;
  return std::visit(
      [t](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return -std::expm1(-law.rate * t) / law.rate;
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          return std::min(t, law.value);
        } else if constexpr (std::is_same_v<L, Lognormal>) {
          // E[S; S <= t] + t P(S > t)
          const double z = (std::log(t) - law.location) / law.scale;
          const double partial = std::exp(law.location + 0.5 * law.scale * law.scale) * normal_cdf(z - law.scale);
          return partial + t * normal_tail(z);
        } else if constexpr (std::is_same_v<L, Weibull>) {
          // (scale / k) * lower_gamma(1/k, (t/scale)^k)
          const double a = 1.0 / law.shape;
          return law.scale * a * boost::math::tgamma_lower(a, std::pow(t / law.scale, law.shape));
        } else {
          const auto split = std::upper_bound(law.sorted.begin(), law.sorted.end(), t);
          const auto below = static_cast<std::size_t>(split - law.sorted.begin());
          const double n = static_cast<double>(law.sorted.size());
          return (law.prefix[below] + t * static_cast<double>(law.sorted.size() - below)) / n;
        }
      },
      law_);
}

double Lifetime::mean() const {
  return std::visit(
      [](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return 1.0 / law.rate;
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          return law.value;
        } else if constexpr (std::is_same_v<L, Lognormal>) {
          return std::exp(law.location + 0.5 * law.scale * law.scale);
        } else if constexpr (std::is_same_v<L, Weibull>) {
          return law.scale * std::tgamma(1.0 + 1.0 / law.shape);
        } else {
          return law.prefix.back() / static_cast<double>(law.sorted.size());
        }
      },
      law_);
}

double Lifetime::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  return std::visit(
      [u](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          return -std::log(u) / law.rate;
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          return law.value;
        } else if constexpr (std::is_same_v<L, Lognormal>) {
          return std::exp(law.location + law.scale * boost::math::quantile(kStdNormal, u));
        } else if constexpr (std::is_same_v<L, Weibull>) {
          return law.scale * std::pow(-std::log(u), 1.0 / law.shape);
        } else {
          auto idx = static_cast<std::size_t>(u * static_cast<double>(law.sorted.size()));
          return law.sorted[std::min(idx, law.sorted.size() - 1)];
        }
      },
      law_);
}

std::string Lifetime::describe() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& law) {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
          out << "exponential(rate=" << law.rate << ")";
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          out << "deterministic(" << law.value << ")";
        } else if constexpr (std::is_same_v<L, Lognormal>) {
          out << "lognormal(location=" << law.location << ", scale=" << law.scale << ")";
        } else if constexpr (std::is_same_v<L, Weibull>) {
          out << "weibull(shape=" << law.shape << ", scale=" << law.scale << ")";
        } else {
          out << "empirical(" << law.sorted.size() << " samples)";
        }
      },
      law_);
  return out.str();
}

}  // namespace lossfluid
