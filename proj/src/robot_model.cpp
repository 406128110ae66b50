#include "trapzopt/robot_model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "trapzopt/errors.hpp"

namespace trapzopt {

void JointLimits::validate() const {
  for (std::size_t m = 0; m < kNumJoints; ++m) {
    if (!(v_max[m] > 0.0) || !std::isfinite(v_max[m])) {
      throw BadConfig("v_max for joint " + std::to_string(m + 1) + " must be positive");
    }
    if (!(a_max[m] > 0.0) || !std::isfinite(a_max[m])) {
      throw BadConfig("a_max for joint " + std::to_string(m + 1) + " must be positive");
    }
  }
}

double KinematicModel::reach() const {
  double total = 0.0;
  for (const auto& row : rows_) total += std::hypot(row.a, row.d);
  return total;
}

Pose forward_kinematics(const KinematicModel& model, const JointConfig& q) {
  Eigen::Isometry3d tf = Eigen::Isometry3d::Identity();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto& row = model.rows()[i];
    // Standard DH: Rz(theta) * Tz(d) * Tx(a) * Rx(alpha)
    Eigen::Isometry3d link = Eigen::Isometry3d::Identity();
    link.rotate(Eigen::AngleAxisd(q[i], Eigen::Vector3d::UnitZ()));
    link.translate(Eigen::Vector3d(row.a, 0.0, row.d));
    link.rotate(Eigen::AngleAxisd(row.alpha, Eigen::Vector3d::UnitX()));
    tf = tf * link;
  }
  return {tf.translation(), tf.linear()};
}

std::string WaypointReport::describe() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << "waypoint " << v.waypoint << ": joint " << v.joint << " = " << v.value
        << " rad outside [-2pi, 2pi]\n";
  }
  return out.str();
}

WaypointReport validate_waypoints(const JointLimits& /*limits*/, const std::vector<JointConfig>& waypoints) {
  if (waypoints.size() < 2) {
    throw EmptyTrajectory("need at least 2 waypoints, got " + std::to_string(waypoints.size()));
  }
  WaypointReport report;
  for (std::size_t w = 0; w < waypoints.size(); ++w) {
    for (std::size_t m = 0; m < kNumJoints; ++m) {
      const double q = waypoints[w][m];
      if (!std::isfinite(q) || std::abs(q) > kJointRange) {
        report.violations.push_back({w, m + 1, q});
      }
    }
  }
  return report;
}

}  // namespace trapzopt
