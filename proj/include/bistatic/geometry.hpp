#pragma once

#include "bistatic/types.hpp"

namespace bistatic::geometry {

// Collinearity gate: the bistatic angle is treated as pi when the law-of-
// cosines angle exceeds pi - kCollinearEps.
inline constexpr double kCollinearEps = 1e-6;

// Parameters of the transmitter-target-receiver triangle at one instant.
// Angles are measured counter-clockwise from the x-axis and stored in
// [0, 2*pi); beta is in [0, pi].
struct BistaticGeometry {
  double L = 0;         // baseline range tx-rx (m)
  double R_T = 0;       // transmitter-to-target range (m)
  double R_R = 0;       // receiver-to-target range (m)
  double d = 0;         // bistatic range R_T + R_R (m)
  double theta = 0;     // receiver look angle (rad)
  double theta_T = 0;   // transmitter look angle (rad)
  double theta_TR = 0;  // transmitter-to-receiver LOS angle (rad)
  double beta = 0;      // bistatic angle at the target (rad)
  double delta = 0;     // target-velocity aspect angle from the outward
                        // bistatic bisector (rad); 0 for a stationary target
  double delta_T = 0;   // transmitter velocity angle from x-axis (rad)
  double delta_R = 0;   // receiver velocity angle from x-axis (rad)

  bool collinear() const { return beta >= kPi - kCollinearEps; }
};

// Builds the full triangle from Cartesian states.
// Throws CollocatedError when the target coincides with either site.
BistaticGeometry build_geometry(const KinematicState& target,
                                const KinematicState& tx,
                                const KinematicState& rx);

// cos(beta/2) as a function of the triangle shape parameters:
//
//   (d + L cos(theta - theta_TR)) / sqrt(d^2 + L^2 + 2 d L cos(theta - theta_TR))
//
// and 0 on the collinear (beta = pi) branch. Throws DomainError when d < L.
double cos_half_bistatic_angle(double d, double L, double theta, double theta_TR);

// Doppler shift of the target echo, defined as the bistatic range rate
// normalized by the wavelength:
//
//   xi = (f_c/c) [ 2|v| cos(delta) cos(beta/2)
//                  - |v_T| cos(delta_T - theta_T) - |v_R| cos(delta_R - theta) ]
//
// The sign convention is xi = (f_c/c) * d(d_k)/dt, i.e. positive for an
// opening bistatic range, which keeps xi consistent with the bistatic
// velocity component of the measurement function.
double doppler_shift(const BistaticGeometry& geom, double target_speed,
                     double tx_speed, double rx_speed, double f_c);

// Partial derivative of the Doppler shift w.r.t. the bistatic range at fixed
// (L, theta, theta_TR):
//
//   (f_c/c) * 2|v| cos(delta) L^2 sin^2(theta - theta_TR)
//           / (d^2 + L^2 + 2 d L cos(theta - theta_TR))^(3/2)
//
// and 0 on the collinear branch. Throws DomainError when d < L.
double dxi_dd(double d, double L, double theta, double theta_TR,
              double target_speed, double delta, double f_c);

inline double dxi_dd(const BistaticGeometry& g, double target_speed,
                     double delta, double f_c) {
  return dxi_dd(g.d, g.L, g.theta, g.theta_TR, target_speed, delta, f_c);
}

}  // namespace bistatic::geometry
