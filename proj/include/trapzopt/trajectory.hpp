#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trapzopt/robot_model.hpp"
#include "trapzopt/time_scaling.hpp"

namespace trapzopt {

enum class MoveType { MoveJ, MoveL, MoveP };

const char* to_string(MoveType mt);

/// Below this max |dq| two waypoints are treated as duplicates.
inline constexpr double kDuplicateWaypointTol = 1e-9;

/// Peak path velocity and acceleration for one segment.
struct SegmentParams {
  double v;
  double a;
};

/// Coordinated joint-space move q(t) = q_start + s(t) * delta, rest to rest.
struct Segment {
  JointConfig q_start;
  JointConfig q_end;
  JointVector delta;
  TrapezoidProfile profile;
  MoveType move_type;

  double duration() const { return profile.duration(); }
};

struct JointSample {
  JointConfig q;
  JointVector q_dot;
  JointVector q_ddot;
};

Segment plan_segment(const JointConfig& q0, const JointConfig& q1, double v, double a,
                     MoveType mt = MoveType::MoveJ);

/// Clamps t to [0, T].
JointSample sample(const Segment& seg, double t);

enum class LimitKind { Velocity, Acceleration };

struct JointLimitViolation {
  std::size_t joint;  // 1-based
  LimitKind kind;
  double peak;
  double limit;
};

struct LimitReport {
  std::vector<JointLimitViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

/// Peak joint velocity is |dq_m|*v and peak joint acceleration |dq_m|*a.
LimitReport check_joint_limits(const Segment& seg, const JointLimits& limits);

class Trajectory {
 public:
  explicit Trajectory(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t waypoint_count() const { return segments_.size() + 1; }

  /// Cumulative segment boundary times t_1 = 0, ..., t_n = total duration.
  const std::vector<double>& boundary_times() const { return boundaries_; }
  double duration() const { return boundaries_.back(); }

  /// Global-time sampling; t is clamped to [0, duration()].
  JointSample sample(double t) const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> boundaries_;
};

/// Plans every segment, then checks waypoint ranges and joint limits. Errors
/// name the offending segment (1-based) and joint.
Trajectory plan_trajectory(const std::vector<JointConfig>& waypoints, const std::vector<SegmentParams>& params,
                           const JointLimits& limits);

}  // namespace trapzopt
