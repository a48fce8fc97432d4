#include <cmath>

#include <gtest/gtest.h>

#include "errors.hpp"
#include "observables.hpp"

using namespace lossfluid;

namespace {

ModelConfig overload(int n = 1) {
  return ModelConfig::make(Intensity::constant(3.0), Lifetime::deterministic(1.0), std::nullopt, 0.0, 2.0, n);
}

}  // namespace

TEST(CongestionRatio, Examples) {
  const ModelConfig under =
      ModelConfig::make(Intensity::constant(0.5), Lifetime::exponential(1.0), std::nullopt, 0.0, 5.0);
  const FluidSolution u = solve(under, default_step(under));
  EXPECT_EQ(congestion_ratio(u, under.intensity(), 5.0), 0.0);

  const FluidSolution o = solve(overload(), default_step(overload()));
  EXPECT_NEAR(congestion_ratio(o, overload().intensity(), 2.0), 2.0 / 3.0, 1e-2);
  EXPECT_NEAR(congestion_ratio(o, overload().intensity(), 1.0 / 3.0), 0.0, 1e-2);
}

TEST(CongestionRatio, UndefinedWithoutLoad) {
  const FluidSolution o = solve(overload(), default_step(overload()));
  EXPECT_THROW((void)congestion_ratio(o, overload().intensity(), 0.0), UndefinedRatio);
  const ModelConfig idle =
      ModelConfig::make(Intensity::constant(0.0), Lifetime::exponential(1.0), std::nullopt, 0.0, 1.0);
  EXPECT_THROW((void)congestion_ratio(solve(idle, 0.1), idle.intensity(), 1.0), UndefinedRatio);
}

TEST(CongestionRatio, StaysInUnitInterval) {
  const ModelConfig cfg = ModelConfig::make(Intensity::sinusoidal(3.0, 1.0, 2.0), Lifetime::exponential(0.5),
                                            std::nullopt, 0.2, 6.0);
  const FluidSolution sol = solve(cfg, default_step(cfg));
  for (int i = 1; i <= 300; ++i) {
    const double r = congestion_ratio(sol, cfg.intensity(), 0.02 * i);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(Idleness, Examples) {
  const ModelConfig empty =
      ModelConfig::make(Intensity::constant(0.0), Lifetime::exponential(1.0), std::nullopt, 0.0, 4.0, 5);
  EXPECT_EQ(idleness(solve(empty, 0.1), 3.0), 3.0);
  EXPECT_EQ(idleness(simulate(empty, 1), 3.0), 3.0);

  const FluidSolution o = solve(overload(), default_step(overload()));
  EXPECT_NEAR(idleness(o, 1.9) - idleness(o, 0.5), 0.0, 1e-9);

  const ModelConfig under =
      ModelConfig::make(Intensity::constant(0.5), Lifetime::exponential(1.0), std::nullopt, 0.0, 5.0);
  EXPECT_NEAR(idleness(solve(under, default_step(under)), 5.0), 5.0 - 2.003369, 5 * default_step(under));
  EXPECT_THROW((void)idleness(o, 2.5), DomainError);
}

TEST(Idleness, NondecreasingAndBelowT) {
  const ModelConfig cfg = ModelConfig::make(Intensity::sinusoidal(2.0 / 3.0, 1.0, 10.0), Lifetime::lognormal(-0.5, 1.0),
                                            std::nullopt, 0.0, 20.0, 20);
  const FluidSolution sol = solve(cfg, default_step(cfg));
  const SimPath path = simulate(cfg, 2);
  double prev_f = 0.0, prev_p = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.05 * i;
    const double f = idleness(sol, t), p = idleness(path, t);
    EXPECT_GE(f, prev_f - 1e-12);
    EXPECT_GE(p, prev_p - 1e-12);
    EXPECT_LE(f, t + 1e-12);
    EXPECT_LE(p, t + 1e-12);
    prev_f = f;
    prev_p = p;
  }
}

TEST(Align, EmptyGridUsesEventTimes) {
  const ModelConfig cfg = overload(10);
  const SimPath path = simulate(cfg, 4);
  const FluidSolution sol = solve(cfg, default_step(cfg));
  const OverlaySeries s = align(path, sol, {});
  ASSERT_FALSE(s.time.empty());
  EXPECT_LE(s.time.size(), path.events().size());
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    EXPECT_EQ(s.rho_n[i], path.occupancy_at(s.time[i]));
    EXPECT_EQ(s.b[i], fluid_blocked(sol, s.time[i]));
  }
}

TEST(Align, IdleSystemSeriesCoincide) {
  const ModelConfig cfg = ModelConfig::make(Intensity::constant(0.0), Lifetime::exponential(1.0),
                                            Lifetime::exponential(1.0), 0.0, 3.0, 7);
  const SimPath path = simulate(cfg, 1);
  const FluidSolution sol = solve(cfg, 0.01);
  const auto grid = uniform_grid(3.0, 30);
  const OverlaySeries s = align(path, sol, grid);
  ASSERT_EQ(s.time.size(), 31u);
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    EXPECT_EQ(s.rho_n[i], s.rho[i]);
    EXPECT_EQ(s.theta_n[i], s.theta[i]);
    EXPECT_TRUE(std::isnan(s.congestion_ratio[i]));
  }
}

TEST(Align, MismatchedModelsRejected) {
  const ModelConfig cfg = overload(10);
  const SimPath path = simulate(cfg, 4);
  const ModelConfig longer =
      ModelConfig::make(Intensity::constant(3.0), Lifetime::deterministic(1.0), std::nullopt, 0.0, 3.0, 10);
  EXPECT_THROW(align(path, solve(longer, 0.01), {}), DomainError);
  const ModelConfig started =
      ModelConfig::make(Intensity::constant(3.0), Lifetime::deterministic(1.0), std::nullopt, 0.5, 2.0, 10);
  EXPECT_THROW(align(path, solve(started, 0.01), {}), DomainError);
}

TEST(UniformGrid, EndpointsIncluded) {
  const auto g = uniform_grid(2.0, 4);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_EQ(g[1], 0.5);
}
