#include "bistatic/tmu.hpp"

#include <cmath>

#include "bistatic/errors.hpp"

namespace bistatic::tmu {

namespace {
constexpr double kCondLimit = 1e12;
}

void SignalModel::validate() const {
  if (!(S1 > 0.0) || !(S3 > 0.0)) throw DomainError("signal FIM: S1, S3 must be positive");
  if (!(S1 * S3 - S2 * S2 > 0.0)) throw DomainError("signal FIM not positive definite");
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("p_fa outside (0,1)");
  if (!(f_c > 0.0)) throw DomainError("f_c must be positive");
  if (!(sigma_theta0 > 0.0)) throw DomainError("sigma_theta0 must be positive");
  if (!(vartheta0 > 0.0)) throw DomainError("vartheta0 must be positive");
}

SignalModel SignalModel::atsc(double vartheta0, double p_fa) {
  SignalModel sig;
  const auto s = atsc_signal_fim(0.05762, 93e-9, 1076000.0);
  sig.S1 = s[0];
  sig.S2 = s[1];
  sig.S3 = s[2];
  sig.vartheta0 = vartheta0;
  sig.p_fa = p_fa;
  sig.validate();
  return sig;
}

double snr(double R_T, double R_R, double vartheta0) {
  if (!(R_T > 0.0) || !(R_R > 0.0)) throw DomainError("snr: nonpositive range");
  const double v2 = vartheta0 * vartheta0;
  const double prod = R_T * R_R;
  return v2 * v2 / (prod * prod);
}

double detection_probability(double psi, double p_fa) {
  return std::pow(p_fa, 1.0 / (1.0 + psi));
}

std::array<double, 3> atsc_signal_fim(double alpha, double T_sym, double N) {
  const double s1 = 2.0 * alpha * alpha / (T_sym * T_sym) *
                    (-1.0 / (kPi * kPi) + 1.0 / (96.0 * alpha * alpha) + 0.125);
  const double s3 = 2.0 * T_sym * T_sym * (1.0 / (4.0 * alpha) + (N * N - 1.0) / 3.0);
  return {s1, 0.0, s3};
}

MeasCov meas_cov_general(const SignalModel& sig, double psi, double dxi_dd) {
  if (!(psi > 0.0)) throw DomainError("meas_cov: psi must be positive");
  const double c = kSpeedOfLight, fc = sig.f_c;
  const double det_s = sig.S1 * sig.S3 - sig.S2 * sig.S2;

  // Condition check on the (d, v) information block J_M = P J_S P^T.
  Eigen::Matrix2d jm;
  const double rho = dxi_dd;
  jm(0, 0) = psi * (sig.S1 / (c * c) + 2.0 * sig.S2 * rho / c + sig.S3 * rho * rho);
  jm(0, 1) = psi * fc / c * (sig.S2 / c + sig.S3 * rho);
  jm(1, 0) = jm(0, 1);
  jm(1, 1) = psi * sig.S3 * fc * fc / (c * c);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(jm);
  const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
  if (!(lmin > 0.0) || lmax / lmin > kCondLimit) {
    throw SingularityError("meas_cov: (d,v) information block ill-conditioned");
  }

  // Closed form of the inverse.
  const double scale = c * c * c * c / (psi * fc * fc * det_s);
  MeasCov r = MeasCov::Zero();
  r(0, 0) = scale * fc * fc / (c * c) * sig.S3;
  r(0, 1) = scale * (-fc / (c * c) * sig.S2 - fc / c * rho * sig.S3);
  r(1, 0) = r(0, 1);
  r(1, 1) = scale * (sig.S1 / (c * c) + 2.0 / c * rho * sig.S2 + rho * rho * sig.S3);
  r(2, 2) = sig.sigma_theta0 * sig.sigma_theta0 / psi;
  return r;
}

MeasCov meas_cov_assumption1(const SignalModel& sig, double psi) {
  if (!(psi > 0.0)) throw DomainError("meas_cov: psi must be positive");
  const double c = kSpeedOfLight, fc = sig.f_c;
  const double det_s = sig.S1 * sig.S3 - sig.S2 * sig.S2;
  const double scale = c * c * c * c / (psi * fc * fc * det_s);
  MeasCov r = MeasCov::Zero();
  r(0, 0) = scale * fc * fc / (c * c) * sig.S3;
  r(0, 1) = scale * (-fc / (c * c) * sig.S2);
  r(1, 0) = r(0, 1);
  r(1, 1) = scale * sig.S1 / (c * c);
  r(2, 2) = sig.sigma_theta0 * sig.sigma_theta0 / psi;
  return r;
}

Vec4 snr_gradient(const KinematicState& target, const Vec2& tx_pos,
                  const Vec2& rx_pos, double vartheta0) {
  const Vec2 to_tx = target.pos - tx_pos;
  const Vec2 to_rx = target.pos - rx_pos;
  const double r_t2 = to_tx.squaredNorm();
  const double r_r2 = to_rx.squaredNorm();
  if (!(r_t2 > 0.0) || !(r_r2 > 0.0)) throw DomainError("snr_gradient: zero range");
  const double v2 = vartheta0 * vartheta0;
  const double coeff = -2.0 * v2 * v2 / (r_t2 * r_t2 * r_r2 * r_r2);
  Vec4 grad = Vec4::Zero();
  grad.head<2>() = coeff * (to_rx * r_t2 + to_tx * r_r2);
  return grad;
}

}  // namespace bistatic::tmu
