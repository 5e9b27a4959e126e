#include "bistatic/tracker.hpp"

#include <cmath>

#include "bistatic/errors.hpp"

namespace bistatic::tracker {

TrackEstimate predict(const TrackEstimate& track, const MotionModel& model) {
  TrackEstimate out;
  out.mean = model.F * track.mean;
  const Mat4 c = model.F * track.cov * model.F.transpose() + model.Q;
  out.cov = 0.5 * (c + c.transpose());
  out.k = track.k + 1;
  return out;
}

TrackEstimate pda_update(const TrackEstimate& track,
                         const clutter::MeasurementSet& z,
                         const tmu::MeasCov& R, double pd,
                         const clutter::ClutterModel& clut,
                         const KinematicState& tx, const KinematicState& rx) {
  const KinematicState pred = KinematicState::from_vec(track.mean);
  const Vec3 z_hat = clutter::measurement_function(pred, tx, rx);
  const Mat34 h = clutter::measurement_jacobian(pred, tx, rx);
  const Mat3 s_raw = h * track.cov * h.transpose() + R;
  const Mat3 s = 0.5 * (s_raw + s_raw.transpose());
  const Eigen::LLT<Mat3> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("pda_update: innovation covariance not PD");
  }

  // Component-wise gate at g innovation sigmas: prediction uncertainty widens
  // the gate beyond the raw measurement noise.
  const Vec3 sigma = s.diagonal().cwiseSqrt();
  std::vector<Vec3> gated;
  for (const Vec3& zi : z.points) {
    Vec3 nu = zi - z_hat;
    nu(2) = wrap_pi(nu(2));
    if (std::abs(nu(0)) < clut.g * sigma(0) &&
        std::abs(nu(1)) < clut.g * sigma(1) &&
        std::abs(nu(2)) < clut.g * sigma(2)) {
      gated.push_back(nu);
    }
  }
  if (gated.empty()) return track;

  const int m = static_cast<int>(gated.size());
  const double vg = std::pow(2.0 * clut.g, 3) * sigma.prod();
  const double lambda_v = clut.lambda * vg;
  const double d = clutter::association_probability(pd, lambda_v, m);

  // Association weights: beta_0 for "none of them", beta_i Gaussian-weighted.
  const double det = s.determinant();
  const double norm = std::sqrt(std::pow(kTwoPi, 3) * det);
  std::vector<double> w(m);
  double w_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    w[i] = d / m * vg * std::exp(-0.5 * gated[i].dot(llt.solve(gated[i]))) / norm;
    w_sum += w[i];
  }
  const double denom = (1.0 - d) + w_sum;
  const double beta0 = (1.0 - d) / denom;
  for (double& wi : w) wi /= denom;

  const Eigen::Matrix<double, 4, 3> k_gain =
      track.cov * h.transpose() * llt.solve(Mat3::Identity());
  Vec3 nu_mix = Vec3::Zero();
  Mat3 spread = Mat3::Zero();
  for (int i = 0; i < m; ++i) {
    nu_mix += w[i] * gated[i];
    spread += w[i] * gated[i] * gated[i].transpose();
  }
  spread -= nu_mix * nu_mix.transpose();

  TrackEstimate out;
  out.k = track.k;
  out.mean = track.mean + k_gain * nu_mix;
  const Mat4 cov_update = track.cov - k_gain * s * k_gain.transpose();
  const Mat4 c = beta0 * track.cov + (1.0 - beta0) * cov_update +
                 k_gain * spread * k_gain.transpose();
  out.cov = 0.5 * (c + c.transpose());
  return out;
}

RmseSeries rmse(const std::vector<RunErrors>& runs) {
  if (runs.empty()) throw LengthMismatchError("rmse: no runs");
  const size_t steps = runs.front().pos_sq.size();
  for (const RunErrors& r : runs) {
    if (r.pos_sq.size() != steps || r.vel_sq.size() != steps) {
      throw LengthMismatchError("rmse: run length mismatch");
    }
  }
  RmseSeries out;
  out.pos.resize(steps);
  out.vel.resize(steps);
  out.pos_mse.resize(steps);
  out.pos_mse_se.resize(steps);
  const double n = static_cast<double>(runs.size());
  for (size_t k = 0; k < steps; ++k) {
    double ps = 0.0, vs = 0.0, ps2 = 0.0;
    for (const RunErrors& r : runs) {
      ps += r.pos_sq[k];
      vs += r.vel_sq[k];
      ps2 += r.pos_sq[k] * r.pos_sq[k];
    }
    out.pos_mse[k] = ps / n;
    out.pos[k] = std::sqrt(ps / n);
    out.vel[k] = std::sqrt(vs / n);
    out.pos_mse_se[k] =
        runs.size() > 1
            ? std::sqrt(std::max(ps2 - ps * ps / n, 0.0) / (n - 1.0) / n)
            : 0.0;
  }
  for (const RunErrors& r : runs) out.diverged_runs += r.diverged ? 1 : 0;
  return out;
}

}  // namespace bistatic::tracker
