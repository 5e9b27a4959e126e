#pragma once

#include <array>

#include "bistatic/types.hpp"

namespace bistatic::tmu {

// Transmitted-signal constants and detection parameters. S1, S2, S3 scale the
// time-delay/Doppler Fisher information (S1 in 1/s^2, S3 in s^2); vartheta0
// is the transmitted signal constant of the fourth-power path-loss law.
struct SignalModel {
  double S1 = 0;
  double S2 = 0;
  double S3 = 0;
  double f_c = 63.1e6;            // carrier frequency (Hz)
  double sigma_theta0 = 3.0 * kPi / 180.0;  // reference DOA std (rad)
  double vartheta0 = 5000.0;      // transmitted signal constant (m)
  double p_fa = 1e-3;             // false alarm rate

  // Throws DomainError when the invariants do not hold (S1 > 0, S3 > 0,
  // S1*S3 - S2^2 > 0, 0 < p_fa < 1, f_c > 0, sigma_theta0 > 0, vartheta0 > 0).
  void validate() const;

  // ATSC defaults used throughout the case studies.
  static SignalModel atsc(double vartheta0 = 5000.0, double p_fa = 1e-3);
};

// Measurement error covariance over (d, v, theta); the theta block is always
// decoupled from the (d, v) block.
using MeasCov = Mat3;

// Receiver SNR from the two-way path loss: vartheta0^4 / (R_T * R_R)^2.
double snr(double R_T, double R_R, double vartheta0);

// Swerling-I detection probability: P_FA^(1/(1+psi)).
double detection_probability(double psi, double p_fa);

// Time-delay/Doppler FIM constants of the ATSC signal with roll-off alpha,
// symbol period T_sym and N transmitted symbols; the SNR factor is applied
// separately. Returns {S1, S2, S3} with S2 = 0.
std::array<double, 3> atsc_signal_fim(double alpha, double T_sym, double N);

// Full measurement error covariance including the Doppler/bistatic-range
// coupling dxi_dd. Throws SingularityError when the (d, v) information block
// has condition number above 1e12.
MeasCov meas_cov_general(const SignalModel& sig, double psi, double dxi_dd);

// Covariance with the Doppler coupling neglected (dxi_dd = 0); depends on the
// geometry only through the SNR.
MeasCov meas_cov_assumption1(const SignalModel& sig, double psi);

// Gradient of the SNR w.r.t. the target state [px py vx vy]; the velocity
// block is identically zero.
Vec4 snr_gradient(const KinematicState& target, const Vec2& tx_pos,
                  const Vec2& rx_pos, double vartheta0);

}  // namespace bistatic::tmu
