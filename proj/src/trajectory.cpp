#include "trapzopt/trajectory.hpp"

#include <algorithm>
#include <sstream>

#include "trapzopt/errors.hpp"

namespace trapzopt {

const char* to_string(MoveType mt) {
  switch (mt) {
    case MoveType::MoveJ:
      return "MoveJ";
    case MoveType::MoveL:
      return "MoveL";
    case MoveType::MoveP:
      return "MoveP";
  }
  return "unknown";
}

Segment plan_segment(const JointConfig& q0, const JointConfig& q1, double v, double a, MoveType mt) {
  if (mt != MoveType::MoveJ) {
    throw UnsupportedMoveType(std::string(to_string(mt)) + " is not plannable; only MoveJ is supported");
  }
  const JointVector delta = q1 - q0;
  if (delta.cwiseAbs().maxCoeff() < kDuplicateWaypointTol) {
    throw ZeroLengthSegment("segment endpoints coincide (max |dq| < 1e-9 rad)");
  }
  return Segment{q0, q1, delta, profile_from_v_a(v, a), mt};
}

JointSample sample(const Segment& seg, double t) {
  const ProfileState st = seg.profile.eval(t);
  // s == 1 exactly only at the end; returning q_end keeps shared waypoints bit-exact.
  const JointConfig q = st.s >= 1.0 ? seg.q_end : JointConfig(seg.q_start + st.s * seg.delta);
  return {q, st.s_dot * seg.delta, st.s_ddot * seg.delta};
}

std::string LimitReport::describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) out << "; ";
    out << "joint " << v.joint << ' ' << (v.kind == LimitKind::Velocity ? "velocity" : "acceleration") << " peak "
        << v.peak << " exceeds limit " << v.limit;
  }
  return out.str();
}

LimitReport check_joint_limits(const Segment& seg, const JointLimits& limits) {
  LimitReport report;
  for (std::size_t m = 0; m < kNumJoints; ++m) {
    const double dq = std::abs(seg.delta[m]);
    const double peak_v = dq * seg.profile.v();
    const double peak_a = dq * seg.profile.a();
    if (peak_v > limits.v_max[m]) report.violations.push_back({m + 1, LimitKind::Velocity, peak_v, limits.v_max[m]});
    if (peak_a > limits.a_max[m]) {
      report.violations.push_back({m + 1, LimitKind::Acceleration, peak_a, limits.a_max[m]});
    }
  }
  return report;
}

Trajectory::Trajectory(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw EmptyTrajectory("trajectory has no segments");
  boundaries_.reserve(segments_.size() + 1);
  boundaries_.push_back(0.0);
  for (const auto& seg : segments_) boundaries_.push_back(boundaries_.back() + seg.duration());
}

JointSample Trajectory::sample(double t) const {
  t = std::clamp(t, 0.0, duration());
  // Last boundary <= t; a boundary time belongs to the segment that starts there.
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
  std::size_t idx = static_cast<std::size_t>(std::distance(boundaries_.begin(), it)) - 1;
  idx = std::min(idx, segments_.size() - 1);
  return trapzopt::sample(segments_[idx], t - boundaries_[idx]);
}

Trajectory plan_trajectory(const std::vector<JointConfig>& waypoints, const std::vector<SegmentParams>& params,
                           const JointLimits& limits) {
  const WaypointReport range = validate_waypoints(limits, waypoints);
  if (!range.ok()) throw LimitViolation(range.describe());
  if (params.size() != waypoints.size() - 1) {
    std::ostringstream msg;
    msg << "expected " << waypoints.size() - 1 << " (v, a) pairs for " << waypoints.size() << " waypoints, got "
        << params.size();
    throw ParamCountMismatch(msg.str());
  }
  std::vector<Segment> segments;
  segments.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string where = "segment " + std::to_string(i + 1) + ": ";
    try {
      segments.push_back(plan_segment(waypoints[i], waypoints[i + 1], params[i].v, params[i].a));
    } catch (const InfeasibleProfile& e) {
      throw InfeasibleProfile(where + e.what());
    } catch (const ZeroLengthSegment& e) {
      throw ZeroLengthSegment(where + e.what());
    }
    const LimitReport report = check_joint_limits(segments.back(), limits);
    if (!report.ok()) throw LimitViolation(where + report.describe());
  }
  return Trajectory(std::move(segments));
}

}  // namespace trapzopt
