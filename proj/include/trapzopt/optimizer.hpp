#pragma once

/**
 * @file optimizer.hpp
 * @brief Inertia-weight particle swarm optimization with a global-best
 * neighborhood, and its application to per-segment (v, a) selection.
 *
 * Every random draw is a pure function of (seed, iteration, particle,
 * dimension, stream), so objective evaluation can run on any number of
 * threads without changing the result.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "trapzopt/objectives.hpp"
#include "trapzopt/robot_model.hpp"
#include "trapzopt/trajectory.hpp"

namespace trapzopt {

struct Bounds {
  double lo;
  double hi;
};

struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t max_iters = 200;
  double w = 0.729;
  double c1 = 1.49445;
  double c2 = 1.49445;
  std::vector<Bounds> bounds;
  std::uint64_t seed = 0;
  std::size_t stall_iters = 30;
  double stall_tol = 1e-8;
  /// Worker threads for objective evaluation; 0 picks hardware concurrency.
  std::size_t threads = 1;

  /// Throws BadConfig on invariant violations or when bounds.size() != dim.
  void validate(std::size_t dim) const;
};

struct Particle {
  std::vector<double> x;
  std::vector<double> vel;
  std::vector<double> pbest_x;
  double pbest_f;
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> gbest_x;
  double gbest_f;
  std::size_t iter = 0;
  std::uint64_t seed = 0;
};

/// Must be pure: it is called concurrently and re-evaluated freely. A throw is
/// scored as +inf.
using Objective = std::function<double(std::span<const double>)>;

/// Uniform in [0, 1), keyed on the full counter tuple.
double counter_uniform(std::uint64_t seed, std::uint64_t iter, std::uint64_t particle, std::uint64_t dim,
                       std::uint64_t stream);

/// Positions uniform in the bounds, zero velocities, pbest = x with pbest_f = +inf.
SwarmState initialize(const PsoConfig& cfg, std::size_t dim);

/// Scores current positions and refreshes personal and global bests.
void evaluate(SwarmState& state, const PsoConfig& cfg, const Objective& objective);

/// One velocity/position update (clamped to bounds) followed by evaluate().
void step(SwarmState& state, const PsoConfig& cfg, const Objective& objective);

struct PsoResult {
  std::vector<double> best_x;
  double best_f;
  std::vector<double> history;  // gbest_f after initialization and after each step
};

/// Stops at max_iters or when gbest improved by no more than stall_tol
/// (relative) over the last stall_iters iterations.
PsoResult run(const PsoConfig& cfg, std::size_t dim, const Objective& objective);

struct TrajectoryPsoConfig {
  PsoConfig pso;  // bounds are filled from v_bounds / a_bounds
  Bounds v_bounds{0.05, 3.0};
  Bounds a_bounds{0.05, 10.0};
  std::size_t audit_grid = 20;  // audit grid is audit_grid x audit_grid shared (v, a)
};

/// Decision vector layout is [v_1, a_1, v_2, a_2, ...]. Raises a to v^2 when
/// v^2/a > 1.
std::vector<SegmentParams> repair(std::span<const double> x);

/// Reference-normalized fitness used inside the swarm. The reference point is
/// the repaired centre of the search box.
class TrajectoryFitness {
 public:
  TrajectoryFitness(std::vector<JointConfig> waypoints, JointLimits limits, Bounds v_bounds, Bounds a_bounds);

  /// +inf when the repaired parameters violate joint limits.
  double operator()(std::span<const double> x) const;
  double of_params(const std::vector<SegmentParams>& params) const;

  ObjectiveReport report(const std::vector<SegmentParams>& params) const;

  double s1_ref() const { return s1_ref_; }
  double s2_ref() const { return s2_ref_; }
  std::size_t segment_count() const { return waypoints_.size() - 1; }

 private:
  std::vector<JointConfig> waypoints_;
  JointLimits limits_;
  double s1_ref_;
  double s2_ref_;
};

struct TrajectoryOptimum {
  std::vector<SegmentParams> params;
  ObjectiveReport report;
  std::vector<double> history;
  std::size_t audit_points = 0;  // feasible audit-grid points
  double audit_best = 0.0;
  double audit_mean = 0.0;
  double audit_worst = 0.0;
};

/// Throws NoFeasiblePoint when the swarm never finds a limit-respecting point.
TrajectoryOptimum optimize_trajectory(const std::vector<JointConfig>& waypoints, const JointLimits& limits,
                                      const TrajectoryPsoConfig& cfg);

}  // namespace trapzopt
