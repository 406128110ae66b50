#pragma once

/**
 * @file time_scaling.hpp
 * @brief Normalized trapezoidal time scaling s: [0, T] -> [0, 1].
 *
 * The profile ramps s_dot up at constant acceleration a for t_a = v/a,
 * cruises at v, then ramps down symmetrically. Only two of (v, a, T) are
 * independent; the three constructors below cover each pair.
 */

namespace trapzopt {

/// Absolute slack on the feasibility guards (v^2/a <= 1, v*T <= 2, a*T^2 >= 4).
inline constexpr double kFeasibilityTol = 1e-12;

struct ProfileState {
  double s;
  double s_dot;
  double s_ddot;
};

class TrapezoidProfile {
 public:
  double v() const { return v_; }
  double a() const { return a_; }
  double duration() const { return T_; }
  double ramp_time() const { return t_a_; }
  double cruise_time() const;

  /// Clamps t to [0, T].
  ProfileState eval(double t) const;

  /// Closed form of the integral of s_ddot(t)^2 over [0, T], i.e. 2*a*v.
  double integral_sq_accel() const { return 2.0 * a_ * v_; }

  friend TrapezoidProfile profile_from_v_a(double v, double a);
  friend TrapezoidProfile profile_from_v_T(double v, double T);
  friend TrapezoidProfile profile_from_a_T(double a, double T);

 private:
  TrapezoidProfile(double v, double a, double T);

  double v_;
  double a_;
  double T_;
  double t_a_;
};

/// Shortest duration for peak velocity v and acceleration a: T = (a + v^2)/(v*a).
/// Throws InfeasibleProfile if v^2/a > 1 (the top speed is never reached).
TrapezoidProfile profile_from_v_a(double v, double a);

/// a = v^2/(v*T - 1). Requires 1 < v*T <= 2.
TrapezoidProfile profile_from_v_T(double v, double T);

/// Smaller root of v^2 - a*T*v + a = 0. Requires a*T^2 >= 4.
TrapezoidProfile profile_from_a_T(double a, double T);

}  // namespace trapzopt
