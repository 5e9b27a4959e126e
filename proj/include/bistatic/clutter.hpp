#pragma once

#include <vector>

#include "bistatic/rng.hpp"
#include "bistatic/tmu.hpp"
#include "bistatic/types.hpp"

namespace bistatic::clutter {

// Poisson clutter model. lambda is the spatial density over the (d, v, theta)
// measurement space; clutter is generated inside the g-sigma validation gate
// around the predicted measurement, whose volume V_g = (2g)^3 prod(sigma_h)
// follows from the current measurement covariance.
struct ClutterModel {
  double lambda = 0.0;  // 1 / (m * m/s * rad)
  double g = 4.0;       // gate size in measurement standard deviations

  void validate() const;

  // Density from a resolution-cell count over a global measurement volume.
  static ClutterModel from_cells(double n_cell, double p_fa, double volume,
                                 double g = 4.0);
};

// Origin-unknown measurements (d, v, theta) returned by one scan.
struct MeasurementSet {
  std::vector<Vec3> points;
  int count() const { return static_cast<int>(points.size()); }
};

// Noise-free measurement h(x) = (bistatic range, bistatic velocity, DOA);
// DOA uses the four-quadrant arctangent wrapped to [0, 2*pi).
Vec3 measurement_function(const KinematicState& target,
                          const KinematicState& tx, const KinematicState& rx);

// Jacobian of h w.r.t. [px py vx vy]; the range and DOA rows have zero
// velocity columns.
Mat34 measurement_jacobian(const KinematicState& target,
                           const KinematicState& tx, const KinematicState& rx);

// Probability that the radar returns m measurements: detection mixed with
// Poisson clutter of mean lambda_v.
double cardinality_probability(double pd, double lambda_v, int m);

// Probability that one of m >= 1 returned measurements is target-originated.
// Throws DomainError when m = 0.
double association_probability(double pd, double lambda_v, int m);

// Gate volume V_g = (2g)^3 * sigma_d * sigma_v * sigma_theta for a diagonal
// measurement covariance.
double gate_volume(const tmu::MeasCov& R, double g);

// Likelihood of the measurement set conditioned on the target state and the
// measurement count: clutter-uniform mixture with one Gaussian target term
// per measurement. Throws DomainError on an empty set, SingularityError on a
// non-positive-definite R.
double conditional_likelihood(const MeasurementSet& z,
                              const KinematicState& target,
                              const KinematicState& tx,
                              const KinematicState& rx, const tmu::MeasCov& R,
                              double pd, const ClutterModel& clutter);

// Samples one scan at the true target state: the target measurement
// h(x) + w, w ~ N(0, R) with probability Pd, plus Poisson(lambda * V_g)
// clutter points uniform over the gate cube around h(x). Pd and R follow
// from the scene geometry (Assumption-1 covariance). Deterministic given the
// stream state; draw order is detection, noise, clutter count, clutter
// points.
MeasurementSet generate_measurements(RngStream& rng,
                                     const KinematicState& truth,
                                     const KinematicState& tx,
                                     const KinematicState& rx,
                                     const tmu::SignalModel& sig,
                                     const ClutterModel& clutter);

}  // namespace bistatic::clutter
