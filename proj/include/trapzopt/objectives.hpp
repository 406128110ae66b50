#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trapzopt/robot_model.hpp"
#include "trapzopt/trajectory.hpp"

namespace trapzopt {

/// Sum over segments and joints of RMS joint acceleration times segment
/// duration: sum_i sum_m |dq_m| * sqrt(2 a_i v_i T_i).
double energy(const Trajectory& traj);

/// Total duration, sum of segment durations.
double cycle_time(const Trajectory& traj);

/// Equal-weight mean of the normalized objectives.
double fitness(double s1_norm, double s2_norm);

struct MinMax {};
struct Reference {
  double value;
};

std::vector<double> normalize(std::span<const double> values, MinMax);
std::vector<double> normalize(std::span<const double> values, Reference ref);

/// F = 100 * (1 - f_best / f_candidate), in percent.
double improvement(double f_candidate, double f_best);

struct SegmentObjectives {
  double duration;
  double energy;
};

struct ObjectiveReport {
  double s1 = 0.0;
  double s2 = 0.0;
  double s1_norm = 0.0;
  double s2_norm = 0.0;
  double ff = 0.0;
  std::string normalization;
  std::vector<SegmentObjectives> segments;
  // Filled in when the report comes out of an optimization run with an audit grid.
  std::optional<double> f_worst;
  std::optional<double> f_average;
};

/// Raw S1/S2 plus per-segment breakdown; normalized fields are left at zero.
ObjectiveReport evaluate_objectives(const Trajectory& traj);

/// How path acceleration is chosen for each velocity of a sweep.
struct AccelRule {
  enum class Kind { Fixed, Proportional };
  Kind kind = Kind::Fixed;
  double value = 0.0;  // a for Fixed, c in a = c*v for Proportional

  double accel_for(double v) const { return kind == Kind::Fixed ? value : value * v; }
  std::string describe() const;
};

/// a = min(3 * v_lim, a_lim), with v_lim and a_lim the largest path velocity
/// and acceleration the joint limits allow on every segment.
AccelRule default_accel_rule(const std::vector<JointConfig>& waypoints, const JointLimits& limits);

/// count velocities evenly spaced on [0.1 * v_top, v_top], where v_top is the
/// largest velocity that is both profile-feasible under `rule` and within the
/// joint velocity limits.
std::vector<double> default_velocity_grid(const std::vector<JointConfig>& waypoints, const JointLimits& limits,
                                          const AccelRule& rule, std::size_t count = 50);

struct SweepRow {
  double v = 0.0;
  double a = 0.0;
  double end_effector_v = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s1_norm = 0.0;
  double s2_norm = 0.0;
  double ff = 0.0;
  bool feasible = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;  // index into rows
  double ff_best = 0.0;
  double ff_average = 0.0;
  double ff_worst = 0.0;
  double f_worst = 0.0;    // improvement of best over worst, percent
  double f_average = 0.0;  // improvement of best over the mean, percent
  std::string accel_rule;
  double mean_chord_length = 0.0;
};

/// Every segment of the path uses the same (v, a). Rows that fail to plan are
/// kept with feasible = false and excluded from normalization. Throws
/// DegenerateRange when fewer than three rows are feasible.
SweepResult sweep(const std::vector<JointConfig>& waypoints, const JointLimits& limits, const KinematicModel& model,
                  std::span<const double> v_grid, const AccelRule& rule);

}  // namespace trapzopt
