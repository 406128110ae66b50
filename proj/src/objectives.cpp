#include "trapzopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "trapzopt/errors.hpp"

namespace trapzopt {

namespace {

double segment_energy(const Segment& seg) {
  // sqrt((1/T) * integral (dq_m * s_ddot)^2 dt) * T = |dq_m| * sqrt(T * integral s_ddot^2 dt)
  const double T = seg.duration();
  const double rms_scale = std::sqrt(seg.profile.integral_sq_accel() * T);
  return seg.delta.cwiseAbs().sum() * rms_scale;
}

struct PathBounds {
  double v_lim = std::numeric_limits<double>::infinity();
  double a_lim = std::numeric_limits<double>::infinity();
};

PathBounds path_bounds(const std::vector<JointConfig>& waypoints, const JointLimits& limits) {
  PathBounds b;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const JointVector dq = (waypoints[i + 1] - waypoints[i]).cwiseAbs();
    for (std::size_t m = 0; m < kNumJoints; ++m) {
      if (dq[m] < kDuplicateWaypointTol) continue;
      b.v_lim = std::min(b.v_lim, limits.v_max[m] / dq[m]);
      b.a_lim = std::min(b.a_lim, limits.a_max[m] / dq[m]);
    }
  }
  return b;
}

}  // namespace

double energy(const Trajectory& traj) {
  double total = 0.0;
  for (const auto& seg : traj.segments()) total += segment_energy(seg);
  return total;
}

double cycle_time(const Trajectory& traj) {
  double total = 0.0;
  for (const auto& seg : traj.segments()) total += seg.duration();
  return total;
}

double fitness(double s1_norm, double s2_norm) { return 0.5 * s1_norm + 0.5 * s2_norm; }

std::vector<double> normalize(std::span<const double> values, MinMax) {
  if (values.empty()) throw DegenerateRange("cannot normalize an empty list");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw DegenerateRange("min-max normalization needs max > min");
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back((x - lo) / (hi - lo));
  return out;
}

std::vector<double> normalize(std::span<const double> values, Reference ref) {
  if (values.empty()) throw DegenerateRange("cannot normalize an empty list");
  if (!(ref.value > 0.0) || !std::isfinite(ref.value)) {
    throw DegenerateRange("reference value must be positive and finite");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(x / ref.value);
  return out;
}

double improvement(double f_candidate, double f_best) {
  if (!(f_candidate > 0.0) || !(f_best > 0.0)) {
    throw InvalidImprovement("improvement needs positive fitness values");
  }
  if (f_best > f_candidate) {
    std::ostringstream msg;
    msg << "best fitness " << f_best << " exceeds candidate " << f_candidate;
    throw InvalidImprovement(msg.str());
  }
  return 100.0 * (1.0 - f_best / f_candidate);
}

ObjectiveReport evaluate_objectives(const Trajectory& traj) {
  ObjectiveReport report;
  report.normalization = "none";
  for (const auto& seg : traj.segments()) {
    const double e = segment_energy(seg);
    report.segments.push_back({seg.duration(), e});
    report.s1 += e;
    report.s2 += seg.duration();
  }
  return report;
}

std::string AccelRule::describe() const {
  std::ostringstream out;
  if (kind == Kind::Fixed) {
    out << "fixed a = " << value;
  } else {
    out << "proportional a = " << value << " * v";
  }
  return out.str();
}

AccelRule default_accel_rule(const std::vector<JointConfig>& waypoints, const JointLimits& limits) {
  const PathBounds b = path_bounds(waypoints, limits);
  if (!std::isfinite(b.v_lim)) throw ZeroLengthSegment("path has no motion");
  return {AccelRule::Kind::Fixed, std::min(3.0 * b.v_lim, b.a_lim)};
}

std::vector<double> default_velocity_grid(const std::vector<JointConfig>& waypoints, const JointLimits& limits,
                                          const AccelRule& rule, std::size_t count) {
  if (count < 3) throw DegenerateRange("velocity grid needs at least 3 points");
  const PathBounds b = path_bounds(waypoints, limits);
  if (!std::isfinite(b.v_lim)) throw ZeroLengthSegment("path has no motion");
  double v_top = b.v_lim;
  if (rule.kind == AccelRule::Kind::Fixed) {
    v_top = std::min(v_top, std::sqrt(rule.value));
  } else {
    // v^2/(c v) <= 1 and c v <= a_lim
    v_top = std::min({v_top, rule.value, b.a_lim / rule.value});
  }
  const double v_lo = 0.1 * v_top;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = v_lo + (v_top - v_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = v_top;
  return grid;
}

SweepResult sweep(const std::vector<JointConfig>& waypoints, const JointLimits& limits, const KinematicModel& model,
                  std::span<const double> v_grid, const AccelRule& rule) {
  if (v_grid.size() < 3) throw DegenerateRange("sweep grid needs at least 3 velocities");
  if (waypoints.size() < 2) throw EmptyTrajectory("sweep needs at least 2 waypoints");

  SweepResult result;
  result.accel_rule = rule.describe();

  double chord_sum = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    chord_sum += (forward_kinematics(model, waypoints[i + 1]).position - forward_kinematics(model, waypoints[i]).position)
                     .norm();
  }
  result.mean_chord_length = chord_sum / static_cast<double>(waypoints.size() - 1);

  for (double v : v_grid) {
    SweepRow row;
    row.v = v;
    row.a = rule.accel_for(v);
    row.end_effector_v = v * result.mean_chord_length;
    try {
      const std::vector<SegmentParams> params(waypoints.size() - 1, SegmentParams{row.v, row.a});
      const Trajectory traj = plan_trajectory(waypoints, params, limits);
      row.s1 = energy(traj);
      row.s2 = cycle_time(traj);
      row.feasible = true;
    } catch (const DomainError& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.rows[i].feasible) ok.push_back(i);
  }
  if (ok.size() < 3) {
    throw DegenerateRange("sweep has " + std::to_string(ok.size()) + " feasible rows; at least 3 are required");
  }

  std::vector<double> s1, s2;
  for (std::size_t i : ok) {
    s1.push_back(result.rows[i].s1);
    s2.push_back(result.rows[i].s2);
  }
  const std::vector<double> s1n = normalize(s1, MinMax{});
  const std::vector<double> s2n = normalize(s2, MinMax{});

  double ff_sum = 0.0;
  result.ff_best = std::numeric_limits<double>::infinity();
  result.ff_worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ok.size(); ++k) {
    SweepRow& row = result.rows[ok[k]];
    row.s1_norm = s1n[k];
    row.s2_norm = s2n[k];
    row.ff = fitness(row.s1_norm, row.s2_norm);
    ff_sum += row.ff;
    if (row.ff < result.ff_best) {
      result.ff_best = row.ff;
      result.best = ok[k];
    }
    result.ff_worst = std::max(result.ff_worst, row.ff);
  }
  result.ff_average = ff_sum / static_cast<double>(ok.size());
  result.f_worst = improvement(result.ff_worst, result.ff_best);
  result.f_average = improvement(result.ff_average, result.ff_best);
  return result;
}

}  // namespace trapzopt
