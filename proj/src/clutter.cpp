#include "bistatic/clutter.hpp"

#include <cmath>

#include "bistatic/errors.hpp"
#include "bistatic/geometry.hpp"

namespace bistatic::clutter {

namespace {
constexpr double kMinRange = 1e-9;

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }
}  // namespace

void ClutterModel::validate() const {
  if (lambda < 0.0) throw DomainError("clutter: lambda must be nonnegative");
  if (!(g > 0.0)) throw DomainError("clutter: gate size must be positive");
}

ClutterModel ClutterModel::from_cells(double n_cell, double p_fa, double volume,
                                      double g) {
  if (!(volume > 0.0)) throw DomainError("clutter: volume must be positive");
  ClutterModel c;
  c.lambda = n_cell * p_fa / volume;
  c.g = g;
  c.validate();
  return c;
}

Vec3 measurement_function(const KinematicState& target,
                          const KinematicState& tx, const KinematicState& rx) {
  const Vec2 to_tx = target.pos - tx.pos;
  const Vec2 to_rx = target.pos - rx.pos;
  const double r_t = to_tx.norm(), r_r = to_rx.norm();
  if (r_t < kMinRange || r_r < kMinRange) {
    throw CollocatedError("measurement: target collocated with a site");
  }
  Vec3 z;
  z(0) = r_t + r_r;
  z(1) = to_tx.dot(target.vel - tx.vel) / r_t + to_rx.dot(target.vel - rx.vel) / r_r;
  z(2) = wrap_two_pi(std::atan2(to_rx(1), to_rx(0)));
  return z;
}

Mat34 measurement_jacobian(const KinematicState& target,
                           const KinematicState& tx, const KinematicState& rx) {
  const Vec2 to_tx = target.pos - tx.pos;
  const Vec2 to_rx = target.pos - rx.pos;
  const double r_t = to_tx.norm(), r_r = to_rx.norm();
  if (r_t < kMinRange || r_r < kMinRange) {
    throw CollocatedError("measurement: target collocated with a site");
  }
  const Vec2 u_t = to_tx / r_t, u_r = to_rx / r_r;
  const Vec2 w_t = target.vel - tx.vel, w_r = target.vel - rx.vel;

  Mat34 h = Mat34::Zero();
  h.block<1, 2>(0, 0) = (u_t + u_r).transpose();
  // d h^v / d pos: orthogonal-projection form of the LOS unit-vector rates.
  h.block<1, 2>(1, 0) = ((w_t - u_t * u_t.dot(w_t)) / r_t +
                         (w_r - u_r * u_r.dot(w_r)) / r_r)
                            .transpose();
  h.block<1, 2>(1, 2) = (u_t + u_r).transpose();
  h(2, 0) = -to_rx(1) / (r_r * r_r);
  h(2, 1) = to_rx(0) / (r_r * r_r);
  return h;
}

double cardinality_probability(double pd, double lambda_v, int m) {
  if (m < 0) throw DomainError("cardinality: m must be nonnegative");
  if (lambda_v < 0.0) throw DomainError("cardinality: lambda_v must be nonnegative");
  // Log-space Poisson terms; lambda_v = 0 handled separately.
  double clutter_m;   // Poisson pmf at m
  double clutter_m1;  // Poisson pmf at m-1
  if (lambda_v == 0.0) {
    clutter_m = m == 0 ? 1.0 : 0.0;
    clutter_m1 = m == 1 ? 1.0 : 0.0;
  } else {
    clutter_m = std::exp(m * std::log(lambda_v) - lambda_v - log_factorial(m));
    clutter_m1 = m >= 1 ? std::exp((m - 1) * std::log(lambda_v) - lambda_v -
                                   log_factorial(m - 1))
                        : 0.0;
  }
  if (m == 0) return (1.0 - pd) * clutter_m;
  return (1.0 - pd) * clutter_m + pd * clutter_m1;
}

double association_probability(double pd, double lambda_v, int m) {
  if (m < 1) throw DomainError("association: m must be at least 1");
  const double denom = (1.0 - pd) * lambda_v / m + pd;
  if (denom <= 0.0) return 0.0;  // pd = 0 and no clutter expected
  return pd / denom;
}

double gate_volume(const tmu::MeasCov& R, double g) {
  const double prod = std::sqrt(R(0, 0) * R(1, 1) * R(2, 2));
  const double side = 2.0 * g;
  return side * side * side * prod;
}

double conditional_likelihood(const MeasurementSet& z,
                              const KinematicState& target,
                              const KinematicState& tx,
                              const KinematicState& rx, const tmu::MeasCov& R,
                              double pd, const ClutterModel& clutter) {
  const int m = z.count();
  if (m < 1) throw DomainError("likelihood: empty measurement set");
  const Eigen::LLT<Mat3> llt(R);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("likelihood: R not positive definite");
  }
  const double det = R.determinant();
  const double norm = std::sqrt(std::pow(kTwoPi, 3) * det);

  const Vec3 h = measurement_function(target, tx, rx);
  const double vg = gate_volume(R, clutter.g);
  const double lambda_v = clutter.lambda * vg;
  const double d = association_probability(pd, lambda_v, m);

  double sum = 0.0;
  for (const Vec3& zi : z.points) {
    Vec3 nu = zi - h;
    nu(2) = wrap_pi(nu(2));
    sum += std::exp(-0.5 * nu.dot(llt.solve(nu))) / norm;
  }
  return (1.0 - d) / std::pow(vg, m) +
         d / (m * std::pow(vg, m - 1)) * sum;
}

MeasurementSet generate_measurements(RngStream& rng,
                                     const KinematicState& truth,
                                     const KinematicState& tx,
                                     const KinematicState& rx,
                                     const tmu::SignalModel& sig,
                                     const ClutterModel& clutter) {
  const auto geom = geometry::build_geometry(truth, tx, rx);
  const double psi = tmu::snr(geom.R_T, geom.R_R, sig.vartheta0);
  const double pd = tmu::detection_probability(psi, sig.p_fa);
  const tmu::MeasCov R = tmu::meas_cov_assumption1(sig, psi);
  const Vec3 h = measurement_function(truth, tx, rx);
  const Vec3 sigma = R.diagonal().cwiseSqrt();

  MeasurementSet out;
  if (rng.uniform01() < pd) {
    Vec3 z = h;
    for (int i = 0; i < 3; ++i) z(i) += sigma(i) * rng.normal();
    z(2) = wrap_two_pi(z(2));
    out.points.push_back(z);
  }
  const int n_clutter = rng.poisson(clutter.lambda * gate_volume(R, clutter.g));
  for (int j = 0; j < n_clutter; ++j) {
    Vec3 z;
    for (int i = 0; i < 3; ++i) {
      z(i) = h(i) + sigma(i) * rng.uniform(-clutter.g, clutter.g);
    }
    z(2) = wrap_two_pi(z(2));
    out.points.push_back(z);
  }
  return out;
}

}  // namespace bistatic::clutter
