#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace lossfluid {

ModelConfig ModelConfig::make(Intensity intensity, Lifetime service, std::optional<Lifetime> initial_service,
                              double r0, double horizon, int capacity) {
  if (!std::isfinite(horizon) || !(horizon > 0.0)) throw ValidationError("model: horizon T must be > 0");
  if (capacity <= 0) throw ValidationError("model: capacity n must be a positive integer");
  if (!std::isfinite(r0) || r0 < 0.0 || r0 > 1.0) throw ValidationError("model: r0 must lie in [0, 1]");
  Intensity bounded = intensity.bounded(horizon);
  if (!std::isfinite(bounded.cumulative(horizon))) throw ValidationError("model: Lambda(T) is not finite");
  Lifetime initial = initial_service ? std::move(*initial_service) : service;
  return ModelConfig(std::move(bounded), std::move(service), std::move(initial), r0, horizon, capacity);
}

ModelConfig ModelConfig::with_capacity(int capacity) const {
  if (capacity <= 0) throw ValidationError("model: capacity n must be a positive integer");
  ModelConfig out = *this;
  out.capacity_ = capacity;
  return out;
}

int ModelConfig::initial_count() const {
  const auto rounded = static_cast<int>(std::lround(r0_ * capacity_));
  return std::min(rounded, capacity_);
}

void ModelConfig::check_time(double t, const char* op) const {
  if (std::isnan(t) || t < 0.0 || t > horizon_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << op << ": t=" << t << " outside the horizon [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
}

std::string ModelConfig::describe() const {
  std::ostringstream out;
  out << "intensity=" << intensity_.describe() << " service=" << service_.describe()
      << " initial_service=" << initial_service_.describe() << " r0=" << r0_ << " T=" << horizon_
      << " n=" << capacity_;
  return out.str();
}

namespace {

// Longest piece handed to the fixed-order rule; the integrand is analytic
// between cuts, so 20 nodes on this length are well below 1e-12 relative.
constexpr double kMaxPiece = 0.5;

double smooth_piece(const Intensity& intensity, const Lifetime& service, double t, double a, double b) {
  auto integrand = [&](double u) { return service.survival(std::max(0.0, t - u)) * intensity.rate(u); };
  // Weibull survival with shape < 1 has an unbounded derivative at lag zero.
  const auto* weibull = std::get_if<Lifetime::Weibull>(&service.variant());
  if (weibull != nullptr && weibull->shape < 1.0 && b >= t - 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, a, b, 15, 1e-10);
  }
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxPiece)));
  const double width = (b - a) / pieces;
  double mass = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == pieces ? b : lo + width;
    mass += boost::math::quadrature::gauss<double, 20>::integrate(integrand, lo, hi);
  }
  return mass;
}

}  // namespace

double surviving_mass(const Intensity& intensity, const Lifetime& service, double t, double a, double b) {
  if (!(a < b)) return 0.0;
  if (auto rate = intensity.constant_on(a, b)) {
    if (*rate == 0.0) return 0.0;
    return *rate * (service.truncated_mean(t - a) - service.truncated_mean(t - b));
  }
  // Piecewise-constant survival: integrate the intensity exactly between jumps.
  if (const auto* det = std::get_if<Lifetime::Deterministic>(&service.variant())) {
    const double lo = std::max(a, t - det->value);
    return lo < b ? intensity.cumulative(b) - intensity.cumulative(lo) : 0.0;
  }
  if (const auto* emp = std::get_if<Lifetime::Empirical>(&service.variant())) {
    // survival(t - u) counts samples above t - u; it only changes at u = t - s.
    const auto& s = emp->sorted;
    const auto first = std::upper_bound(s.begin(), s.end(), t - b);
    const auto last = std::lower_bound(first, s.end(), t - a);
    std::vector<double> cuts{a};
    for (auto it = last; it != first; --it) cuts.push_back(t - *(it - 1));
    cuts.push_back(b);
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i] < cuts[i + 1])) continue;
      const double level = service.survival(std::max(0.0, t - 0.5 * (cuts[i] + cuts[i + 1])));
      mass += level * (intensity.cumulative(cuts[i + 1]) - intensity.cumulative(cuts[i]));
    }
    return mass;
  }
  // Split where the intensity may kink, then integrate each smooth piece.
  std::vector<double> cuts{a, b};
  for (double c : intensity.thinning_partition(b)) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    if (auto rate = intensity.constant_on(cuts[i], cuts[i + 1])) {
      mass += *rate * (service.truncated_mean(t - cuts[i]) - service.truncated_mean(t - cuts[i + 1]));
    } else {
      mass += smooth_piece(intensity, service, t, cuts[i], cuts[i + 1]);
    }
  }
  return mass;
}

}  // namespace lossfluid
