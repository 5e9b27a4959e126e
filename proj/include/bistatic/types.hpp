#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace bistatic {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // rounding at the seam
  return w;
}

// Wrap an angle to (-pi, pi].
inline double wrap_pi(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w <= 0.0) w += kTwoPi;
  return w - kPi;
}

// 2D position + velocity of a platform or target.
struct KinematicState {
  Vec2 pos = Vec2::Zero();  // m
  Vec2 vel = Vec2::Zero();  // m/s

  Vec4 vec() const {
    Vec4 x;
    x << pos(0), pos(1), vel(0), vel(1);
    return x;
  }
  static KinematicState from_vec(const Vec4& x) {
    return {Vec2(x(0), x(1)), Vec2(x(2), x(3))};
  }
  double speed() const { return vel.norm(); }
};

// Nearly-constant-velocity motion model over sampling period T with
// continuous white-noise-acceleration intensity q (m^2/s^3 per axis).
struct MotionModel {
  Mat4 F = Mat4::Identity();
  Mat4 Q = Mat4::Zero();
  double T = 1.0;

  static MotionModel ncv(double T, double q) {
    MotionModel m;
    m.T = T;
    m.F << 1, 0, T, 0,
           0, 1, 0, T,
           0, 0, 1, 0,
           0, 0, 0, 1;
    const double t3 = T * T * T / 3.0, t2 = T * T / 2.0;
    m.Q << q * t3, 0, q * t2, 0,
           0, q * t3, 0, q * t2,
           q * t2, 0, q * T, 0,
           0, q * t2, 0, q * T;
    return m;
  }
};

}  // namespace bistatic
