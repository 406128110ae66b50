#include "trapzopt/optimizer.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "trapzopt/errors.hpp"

namespace trapzopt {
namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

PsoConfig sphere_config(std::size_t dim, std::uint64_t seed) {
  PsoConfig cfg;
  cfg.bounds.assign(dim, Bounds{-5.12, 5.12});
  cfg.seed = seed;
  return cfg;
}

TEST(CounterUniform, RangeAndIndependenceOfOrder) {
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = counter_uniform(42, i, i % 7, i % 3, 1);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
  EXPECT_EQ(counter_uniform(1, 2, 3, 4, 5), counter_uniform(1, 2, 3, 4, 5));
  EXPECT_NE(counter_uniform(1, 2, 3, 4, 1), counter_uniform(1, 2, 3, 4, 2));
}

TEST(Initialize, DeterministicAndInBounds) {
  PsoConfig cfg;
  cfg.bounds = {{0.0, 1.0}, {-3.0, 2.0}, {5.0, 5.5}};
  cfg.seed = 123;
  const SwarmState a = initialize(cfg, 3);
  const SwarmState b = initialize(cfg, 3);
  ASSERT_EQ(a.particles.size(), cfg.swarm_size);
  for (std::size_t i = 0; i < a.particles.size(); ++i) {
    EXPECT_EQ(a.particles[i].x, b.particles[i].x);
    EXPECT_EQ(a.particles[i].pbest_x, a.particles[i].x);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_GE(a.particles[i].x[j], cfg.bounds[j].lo);
      EXPECT_LE(a.particles[i].x[j], cfg.bounds[j].hi);
      EXPECT_EQ(a.particles[i].vel[j], 0.0);
    }
  }
}

TEST(Initialize, BadConfig) {
  PsoConfig cfg = sphere_config(2, 0);
  cfg.swarm_size = 1;
  EXPECT_THROW(initialize(cfg, 2), BadConfig);
  cfg = sphere_config(2, 0);
  EXPECT_THROW(initialize(cfg, 3), BadConfig);
  cfg.w = 1.0;
  EXPECT_THROW(initialize(cfg, 2), BadConfig);
  cfg = sphere_config(2, 0);
  cfg.bounds[1] = {1.0, -1.0};
  EXPECT_THROW(initialize(cfg, 2), BadConfig);
}

TEST(Step, FixedPointWhenAtBothBests) {
  PsoConfig cfg = sphere_config(2, 0);
  cfg.swarm_size = 2;
  SwarmState state = initialize(cfg, 2);
  for (auto& p : state.particles) {
    p.x = {0.0, 0.0};
    p.pbest_x = p.x;
    p.pbest_f = 0.0;
  }
  state.gbest_x = {0.0, 0.0};
  state.gbest_f = 0.0;
  step(state, cfg, sphere);
  for (const auto& p : state.particles) {
    EXPECT_EQ(p.x, (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(p.vel, (std::vector<double>{0.0, 0.0}));
  }
}

TEST(Step, SocialOnlyMovesTowardGlobalBest) {
  PsoConfig cfg = sphere_config(2, 3);
  cfg.w = 0.0;
  cfg.c1 = 0.0;
  SwarmState state = initialize(cfg, 2);
  evaluate(state, cfg, sphere);
  const SwarmState before = state;
  step(state, cfg, sphere);
  for (std::size_t i = 0; i < state.particles.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double pull = before.gbest_x[j] - before.particles[i].x[j];
      const double moved = state.particles[i].x[j] - before.particles[i].x[j];
      if (pull == 0.0) {
        EXPECT_EQ(moved, 0.0);
      } else {
        const double ratio = moved / pull;
        EXPECT_GE(ratio, 0.0);
        EXPECT_LE(ratio, cfg.c2);
      }
    }
  }
}

TEST(Step, ObjectiveFailureScoredAsInfinity) {
  PsoConfig cfg = sphere_config(1, 0);
  SwarmState state = initialize(cfg, 1);
  evaluate(state, cfg, [](std::span<const double> x) -> double {
    if (x[0] > 0.0) throw std::runtime_error("bad region");
    return -x[0];
  });
  for (const auto& p : state.particles) {
    if (p.x[0] > 0.0) {
      EXPECT_EQ(p.pbest_f, std::numeric_limits<double>::infinity());
    }
  }
  EXPECT_TRUE(std::isfinite(state.gbest_f));
}

TEST(Run, SphereTwoDimensions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PsoResult res = run(sphere_config(2, seed), 2, sphere);
    EXPECT_LT(res.best_f, 1e-6) << "seed " << seed;
    EXPECT_LE(res.history.size(), 201u);
  }
}

TEST(Run, SphereFourDimensions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PsoConfig cfg = sphere_config(4, seed);
    cfg.max_iters = 500;
    EXPECT_LT(run(cfg, 4, sphere).best_f, 1e-4) << "seed " << seed;
  }
}

TEST(Run, HistoryMonotoneAndBoundsRespected) {
  PsoConfig cfg;
  cfg.bounds = {{-1.0, 2.0}, {0.5, 3.0}};
  std::atomic<bool> out_of_bounds{false};
  const auto shifted = [&](std::span<const double> x) {
    if (x[0] < -1.0 || x[0] > 2.0 || x[1] < 0.5 || x[1] > 3.0) out_of_bounds = true;
    return (x[0] - 5.0) * (x[0] - 5.0) + (x[1] + 1.0) * (x[1] + 1.0);
  };
  const PsoResult res = run(cfg, 2, shifted);
  EXPECT_FALSE(out_of_bounds);
  for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_LE(res.history[i], res.history[i - 1]);
  EXPECT_NEAR(res.best_x[0], 2.0, 1e-6);
  EXPECT_NEAR(res.best_x[1], 0.5, 1e-6);
}

TEST(Run, ConstantObjectiveStopsOnStall) {
  PsoConfig cfg = sphere_config(3, 0);
  const PsoResult res = run(cfg, 3, [](std::span<const double>) { return 4.25; });
  EXPECT_EQ(res.best_f, 4.25);
  EXPECT_EQ(res.history.size(), cfg.stall_iters + 1);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  PsoConfig cfg = sphere_config(5, 77);
  const PsoResult serial = run(cfg, 5, sphere);
  cfg.threads = 4;
  const PsoResult parallel = run(cfg, 5, sphere);
  EXPECT_EQ(serial.history, parallel.history);
  EXPECT_EQ(serial.best_x, parallel.best_x);
  EXPECT_EQ(run(cfg, 5, sphere).history, parallel.history);
}

TEST(Run, PersonalBestReevaluatesExactly) {
  PsoConfig cfg = sphere_config(2, 5);
  SwarmState state = initialize(cfg, 2);
  evaluate(state, cfg, sphere);
  for (int i = 0; i < 20; ++i) step(state, cfg, sphere);
  for (const auto& p : state.particles) EXPECT_EQ(sphere(p.pbest_x), p.pbest_f);
  double min_pbest = std::numeric_limits<double>::infinity();
  for (const auto& p : state.particles) min_pbest = std::min(min_pbest, p.pbest_f);
  EXPECT_EQ(state.gbest_f, min_pbest);
}

// --- trajectory optimization ------------------------------------------------

JointConfig joint1(double x) {
  JointConfig q = JointConfig::Zero();
  q[0] = x;
  return q;
}

TrajectoryPsoConfig traj_config() {
  TrajectoryPsoConfig cfg;
  cfg.v_bounds = {0.1, 3.0};
  cfg.a_bounds = {0.1, 8.0};
  return cfg;
}

TEST(Repair, RaisesAccelerationToFeasibility) {
  const std::vector<double> x{2.0, 1.0, 0.5, 3.0};
  const auto p = repair(x);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0].a, 4.0);
  EXPECT_DOUBLE_EQ(p[1].a, 3.0);
  EXPECT_NO_THROW(profile_from_v_a(p[0].v, p[0].a));
}

TEST(OptimizeTrajectory, SingleSegmentBeatsCorners) {
  const std::vector<JointConfig> wps{JointConfig::Zero(), joint1(1.0)};
  JointLimits limits;
  limits.v_max.setConstant(100.0);
  limits.a_max.setConstant(100.0);
  const TrajectoryPsoConfig cfg = traj_config();
  const TrajectoryOptimum opt = optimize_trajectory(wps, limits, cfg);
  const TrajectoryFitness f(wps, limits, cfg.v_bounds, cfg.a_bounds);

  ASSERT_EQ(opt.params.size(), 1u);
  EXPECT_GT(opt.params[0].v, cfg.v_bounds.lo);
  EXPECT_LT(opt.params[0].v, cfg.v_bounds.hi);
  EXPECT_LE(opt.params[0].v * opt.params[0].v / opt.params[0].a, 1.0 + kFeasibilityTol);
  EXPECT_EQ(opt.report.ff, f.of_params(opt.params));
  for (double v : {cfg.v_bounds.lo, cfg.v_bounds.hi}) {
    for (double a : {cfg.a_bounds.lo, cfg.a_bounds.hi}) {
      EXPECT_LE(opt.report.ff, f(std::vector<double>{v, a}));
    }
  }
  ASSERT_TRUE(opt.report.f_average.has_value());
  EXPECT_GT(*opt.report.f_average, 0.0);
  EXPECT_LE(opt.report.ff, opt.audit_best);
}

TEST(OptimizeTrajectory, CollapsedBoundsReturnThePoint) {
  const std::vector<JointConfig> wps{JointConfig::Zero(), joint1(1.0)};
  TrajectoryPsoConfig cfg;
  cfg.v_bounds = {1.2, 1.2};
  cfg.a_bounds = {1.8, 1.8};
  const TrajectoryOptimum opt = optimize_trajectory(wps, JointLimits{}, cfg);
  EXPECT_EQ(opt.params[0].v, 1.2);
  EXPECT_EQ(opt.params[0].a, 1.8);
  EXPECT_DOUBLE_EQ(opt.report.s2, 1.5);
}

TEST(OptimizeTrajectory, NoFeasiblePoint) {
  const std::vector<JointConfig> wps{JointConfig::Zero(), joint1(1.0)};
  JointLimits tight;
  tight.v_max.setConstant(0.01);
  EXPECT_THROW(optimize_trajectory(wps, tight, traj_config()), NoFeasiblePoint);
}

TEST(OptimizeTrajectory, PerSegmentParamsTrackSegmentLengths) {
  JointConfig mid, end;
  mid << 0.2, 0.0, 0.0, 0.0, 0.0, 0.0;
  end << 0.2, 1.5, -0.5, 0.0, 0.0, 0.0;
  const std::vector<JointConfig> wps{JointConfig::Zero(), mid, end};
  const JointLimits limits;
  TrajectoryPsoConfig cfg = traj_config();
  cfg.pso.max_iters = 400;
  const TrajectoryOptimum opt = optimize_trajectory(wps, limits, cfg);
  ASSERT_EQ(opt.params.size(), 2u);
  EXPECT_GT(std::abs(opt.params[0].v - opt.params[1].v) + std::abs(opt.params[0].a - opt.params[1].a), 1e-3);

  // Brute force each segment on a 100 x 100 grid; the fitness is separable
  // once the reference values are fixed.
  const TrajectoryFitness f(wps, limits, cfg.v_bounds, cfg.a_bounds);
  double grid_total = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    const std::vector<JointConfig> one{wps[s], wps[s + 1]};
    const auto best = oracle::grid_search_2d(
        [&](double v, double a) {
          const SegmentParams p = repair(std::vector<double>{v, a}).front();
          try {
            const Trajectory t = plan_trajectory(one, {p}, limits);
            return 0.5 * energy(t) / f.s1_ref() + 0.5 * cycle_time(t) / f.s2_ref();
          } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
          }
        },
        cfg.v_bounds.lo, cfg.v_bounds.hi, cfg.a_bounds.lo, cfg.a_bounds.hi, 100);
    grid_total += best.f;
  }
  EXPECT_LE(std::abs(opt.report.ff - grid_total) / grid_total, 0.01)
      << "pso " << opt.report.ff << " grid " << grid_total;
}

}  // namespace
}  // namespace trapzopt
