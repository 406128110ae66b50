#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace trapzopt {

inline constexpr std::size_t kNumJoints = 6;

using JointVector = Eigen::Matrix<double, 6, 1>;

/// Six joint angles in radians. Valid range per joint is [-2*pi, 2*pi].
using JointConfig = JointVector;

inline constexpr double kJointRange = 2.0 * std::numbers::pi;

struct JointLimits {
  JointVector v_max = JointVector::Constant(std::numbers::pi);
  JointVector a_max = JointVector::Constant(2.0 * std::numbers::pi);

  /// Throws BadConfig unless every entry is strictly positive.
  void validate() const;
};

struct DhRow {
  double a;      // m
  double d;      // m
  double alpha;  // rad
};

class KinematicModel {
 public:
  explicit KinematicModel(const std::array<DhRow, kNumJoints>& rows) : rows_(rows) {}

  const std::array<DhRow, kNumJoints>& rows() const { return rows_; }

  // Upper bound on the distance from the base frame origin to the flange:
  // each link translates by at most sqrt(a^2 + d^2).
  double reach() const;

 private:
  std::array<DhRow, kNumJoints> rows_;
};

struct Pose {
  Eigen::Vector3d position;
  Eigen::Matrix3d rotation;
};

Pose forward_kinematics(const KinematicModel& model, const JointConfig& q);

struct JointRangeViolation {
  std::size_t waypoint;  // 0-based
  std::size_t joint;     // 1-based, as printed
  double value;
};

struct WaypointReport {
  std::vector<JointRangeViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

/// Throws EmptyTrajectory for fewer than two waypoints.
WaypointReport validate_waypoints(const JointLimits& limits, const std::vector<JointConfig>& waypoints);

/// Robot description file contents.
struct RobotDescription {
  KinematicModel model;
  JointLimits limits;
};

}  // namespace trapzopt
