#pragma once

#include <optional>
#include <string>

#include "intensity.hpp"
#include "lifetimes.hpp"

namespace lossfluid {

/// One problem instance: arrival intensity, service law F, initial-job law G,
/// initial occupied fraction r0, horizon T and (for simulation only) the
/// number of servers n.
class ModelConfig {
 public:
  // G defaults to F when not given. Throws ValidationError.
  static ModelConfig make(Intensity intensity, Lifetime service, std::optional<Lifetime> initial_service, double r0,
                          double horizon, int capacity = 1);

  [[nodiscard]] ModelConfig with_capacity(int capacity) const;

  [[nodiscard]] const Intensity& intensity() const { return intensity_; }
  [[nodiscard]] const Lifetime& service() const { return service_; }
  [[nodiscard]] const Lifetime& initial_service() const { return initial_service_; }
  [[nodiscard]] double r0() const { return r0_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] int capacity() const { return capacity_; }

  // N_0 = round(r0 * n); never exceeds n.
  [[nodiscard]] int initial_count() const;

  // Throws DomainError unless 0 <= t <= T.
  void check_time(double t, const char* op) const;

  [[nodiscard]] std::string describe() const;

 private:
  ModelConfig(Intensity intensity, Lifetime service, Lifetime initial_service, double r0, double horizon, int capacity)
      : intensity_(std::move(intensity)),
        service_(std::move(service)),
        initial_service_(std::move(initial_service)),
        r0_(r0),
        horizon_(horizon),
        capacity_(capacity) {}

  Intensity intensity_;
  Lifetime service_;
  Lifetime initial_service_;
  double r0_;
  double horizon_;
  int capacity_;
};

// int_a^b survival(t - u) * rate(u) du for 0 <= a <= b <= t: the mass admitted
// on [a, b) at full rate that is still in service at time t.
double surviving_mass(const Intensity& intensity, const Lifetime& service, double t, double a, double b);

}  // namespace lossfluid
