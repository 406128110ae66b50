#include "trapzopt/time_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trapzopt/errors.hpp"

namespace trapzopt {

namespace {

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || x <= 0.0) {
    std::ostringstream msg;
    msg << name << " must be a positive finite number, got " << x;
    throw InfeasibleProfile(msg.str());
  }
}

}  // namespace

TrapezoidProfile::TrapezoidProfile(double v, double a, double T)
    : v_(v), a_(a), T_(T), t_a_(std::min(v / a, 0.5 * T)) {}

double TrapezoidProfile::cruise_time() const { return std::max(0.0, T_ - 2.0 * t_a_); }

ProfileState TrapezoidProfile::eval(double t) const {
  t = std::clamp(t, 0.0, T_);
  if (t < t_a_) {
    return {0.5 * a_ * t * t, a_ * t, a_};
  }
  if (t <= T_ - t_a_ && t_a_ < T_ - t_a_) {
    return {v_ * t - v_ * v_ / (2.0 * a_), v_, 0.0};
  }
  const double remaining = T_ - t;
  return {1.0 - 0.5 * a_ * remaining * remaining, a_ * remaining, -a_};
}

TrapezoidProfile profile_from_v_a(double v, double a) {
  require_positive(v, "v");
  require_positive(a, "a");
  const double area = v * v / a;
  if (area > 1.0 + kFeasibilityTol) {
    std::ostringstream msg;
    msg << "v^2/a = " << area << " exceeds 1: peak velocity " << v
        << " is unreachable with acceleration " << a << " over unit displacement";
    throw InfeasibleProfile(msg.str());
  }
  return TrapezoidProfile(v, a, (a + v * v) / (v * a));
}

TrapezoidProfile profile_from_v_T(double v, double T) {
  require_positive(v, "v");
  require_positive(T, "T");
  const double vT = v * T;
  if (vT <= 1.0) {
    std::ostringstream msg;
    msg << "v*T = " << vT << " must exceed 1: top speed cannot cover unit displacement in time";
    throw InfeasibleProfile(msg.str());
  }
  if (vT > 2.0 + kFeasibilityTol) {
    std::ostringstream msg;
    msg << "v*T = " << vT << " exceeds 2: no trapezoidal profile peaks at v and finishes at T";
    throw InfeasibleProfile(msg.str());
  }
  return TrapezoidProfile(v, v * v / (vT - 1.0), T);
}

TrapezoidProfile profile_from_a_T(double a, double T) {
  require_positive(a, "a");
  require_positive(T, "T");
  const double aT2 = a * T * T;
  if (aT2 < 4.0 - kFeasibilityTol) {
    std::ostringstream msg;
    msg << "a*T^2 = " << aT2 << " is below 4: motion cannot finish within T";
    throw InfeasibleProfile(msg.str());
  }
  // v = (aT - sqrt(a(aT^2 - 4)))/2, rewritten through the product of roots
  // (v_small * v_large = a) so it stays accurate when v << sqrt(a).
  const double disc = std::max(0.0, a * (aT2 - 4.0));
  const double v = 2.0 * a / (a * T + std::sqrt(disc));
  return TrapezoidProfile(v, a, T);
}

}  // namespace trapzopt
