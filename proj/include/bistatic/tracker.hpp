#pragma once

#include <vector>

#include "bistatic/clutter.hpp"
#include "bistatic/types.hpp"

namespace bistatic::tracker {

struct TrackEstimate {
  Vec4 mean = Vec4::Zero();
  Mat4 cov = Mat4::Identity();
  int k = 0;
};

// Kalman time update through the motion model.
TrackEstimate predict(const TrackEstimate& track, const MotionModel& model);

// Probabilistic-data-association measurement update. Measurements are gated
// component-wise at g measurement standard deviations around the predicted
// measurement; association weights follow the detection/clutter mixture with
// gate volume V_g. DOA innovations are wrapped to (-pi, pi]. With an empty
// gate the prediction is returned unchanged.
TrackEstimate pda_update(const TrackEstimate& track,
                         const clutter::MeasurementSet& z,
                         const tmu::MeasCov& R, double pd,
                         const clutter::ClutterModel& clut,
                         const KinematicState& tx, const KinematicState& rx);

// One Monte Carlo run: per-step squared errors plus a divergence flag.
struct RunErrors {
  std::vector<double> pos_sq;  // squared position error per step
  std::vector<double> vel_sq;  // squared velocity error per step
  bool diverged = false;
};

struct RmseSeries {
  std::vector<double> pos;  // per-step position RMSE (m)
  std::vector<double> vel;  // per-step velocity RMSE (m/s)
  std::vector<double> pos_mse;
  std::vector<double> pos_mse_se;  // run-to-run standard error of the MSE
  int diverged_runs = 0;
};

// Per-step RMSE over runs. Diverged runs are counted, not dropped.
// Throws LengthMismatchError when run lengths differ or no run is given.
RmseSeries rmse(const std::vector<RunErrors>& runs);

}  // namespace bistatic::tracker
