#include "bistatic/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bistatic/errors.hpp"

namespace bistatic::geometry {

namespace {

constexpr double kMinRange = 1e-9;  // m

double angle_of(const Vec2& v) { return wrap_two_pi(std::atan2(v(1), v(0))); }

// Bistatic angle from the three side lengths, clamped law of cosines.
double beta_from_sides(double r_t, double r_r, double l) {
  double c = (r_t * r_t + r_r * r_r - l * l) / (2.0 * r_t * r_r);
  c = std::clamp(c, -1.0, 1.0);
  double beta = std::acos(c);
  if (beta > kPi - kCollinearEps) beta = kPi;
  return beta;
}

}  // namespace

BistaticGeometry build_geometry(const KinematicState& target,
                                const KinematicState& tx,
                                const KinematicState& rx) {
  BistaticGeometry g;
  const Vec2 to_tx = target.pos - tx.pos;   // tx -> target
  const Vec2 to_rx = target.pos - rx.pos;   // rx -> target
  g.R_T = to_tx.norm();
  g.R_R = to_rx.norm();
  if (g.R_T < kMinRange || g.R_R < kMinRange) {
    throw CollocatedError("target collocated with transmitter or receiver");
  }
  g.L = (rx.pos - tx.pos).norm();
  g.d = g.R_T + g.R_R;
  g.theta = angle_of(to_rx);
  g.theta_T = angle_of(to_tx);
  g.theta_TR = g.L > 0.0 ? angle_of(rx.pos - tx.pos) : 0.0;
  g.beta = beta_from_sides(g.R_T, g.R_R, g.L);

  // delta: angle from the outward internal-angle bisector at the target to
  // the target velocity vector. The bisector of the two site-to-target
  // directions degenerates when beta = pi; delta is left 0 there (the
  // collinear Doppler branch does not use it).
  const Vec2 bisector = to_tx / g.R_T + to_rx / g.R_R;
  if (target.speed() > 0.0 && bisector.norm() > kCollinearEps) {
    g.delta = wrap_two_pi(angle_of(target.vel) - angle_of(bisector));
  }
  if (tx.speed() > 0.0) g.delta_T = angle_of(tx.vel);
  if (rx.speed() > 0.0) g.delta_R = angle_of(rx.vel);
  return g;
}

double cos_half_bistatic_angle(double d, double L, double theta,
                               double theta_TR) {
  if (d < L) throw DomainError("bistatic range below baseline");
  if (L == 0.0) return 1.0;  // monostatic: beta = 0
  const double cos_rel = std::cos(theta - theta_TR);
  const double num = d + L * cos_rel;
  const double q = d * d + L * L + 2.0 * d * L * cos_rel;
  if (num <= 0.0 || q <= 0.0) return 0.0;  // degenerate triangle on baseline
  // Recover the triangle and apply the same collinearity gate as
  // build_geometry.
  const double r_r = (d * d - L * L) / (2.0 * num);
  const double r_t = d - r_r;
  if (r_r < kCollinearEps * d || r_t < kCollinearEps * d) {
    // Target at a site; treat as the degenerate collinear case.
    return 0.0;
  }
  if (beta_from_sides(r_t, r_r, L) >= kPi) return 0.0;
  return num / std::sqrt(q);
}

double doppler_shift(const BistaticGeometry& geom, double target_speed,
                     double tx_speed, double rx_speed, double f_c) {
  const double chb =
      cos_half_bistatic_angle(geom.d, geom.L, geom.theta, geom.theta_TR);
  const double target_term = 2.0 * target_speed * std::cos(geom.delta) * chb;
  const double tx_term = tx_speed * std::cos(geom.delta_T - geom.theta_T);
  const double rx_term = rx_speed * std::cos(geom.delta_R - geom.theta);
  return f_c / kSpeedOfLight * (target_term - tx_term - rx_term);
}

double dxi_dd(double d, double L, double theta, double theta_TR,
              double target_speed, double delta, double f_c) {
  if (d < L) throw DomainError("bistatic range below baseline");
  if (L == 0.0) return 0.0;
  if (cos_half_bistatic_angle(d, L, theta, theta_TR) == 0.0) return 0.0;
  const double cos_rel = std::cos(theta - theta_TR);
  const double sin_rel = std::sin(theta - theta_TR);
  const double q = d * d + L * L + 2.0 * d * L * cos_rel;
  return f_c / kSpeedOfLight * 2.0 * target_speed * std::cos(delta) * L * L *
         sin_rel * sin_rel / std::sqrt(q * q * q);
}

}  // namespace bistatic::geometry
