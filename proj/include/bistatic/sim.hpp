#pragma once

#include <string>
#include <vector>

#include "bistatic/bounds.hpp"
#include "bistatic/config.hpp"
#include "bistatic/control.hpp"
#include "bistatic/csv.hpp"
#include "bistatic/tracker.hpp"

namespace bistatic::sim {

// Places the sweep target at range r_r and look angle theta from the
// receiver, moving tangentially or radially at the sweep speed.
KinematicState sweep_target(const config::Scenario& s, double r_r, double theta);

// ---- Case 1: geometry impact on measurement uncertainty -------------------

struct TmuRow {
  double value = 0;
  double sigma_d = 0, sigma_v = 0, sigma_theta = 0, pd = 0;
};

std::vector<TmuRow> run_tmu_sweep(const config::Scenario& s);
csv::Table tmu_sweep_table(const config::Scenario& s, const std::vector<TmuRow>& rows);

// Assumption-1 numerical validation: Doppler/range derivative and the
// bistatic-velocity std with and without the approximation.
struct Assumption1Row {
  double theta = 0;
  double dxi_dd = 0;
  double sigma_v_general = 0;
  double sigma_v_assumption1 = 0;
  double rel_diff = 0;
};

std::vector<Assumption1Row> run_assumption1(const config::Scenario& s);
csv::Table assumption1_table(const std::vector<Assumption1Row>& rows);

// ---- Case 2: single-step bound comparison ---------------------------------

struct BoundRow {
  double value = 0;
  std::vector<bounds::BoundValue> traces;  // aligned with scenario.variants
};

std::vector<BoundRow> run_bound_comparison(const config::Scenario& s, int threads = 0);
csv::Table bound_comparison_table(const config::Scenario& s,
                                  const std::vector<BoundRow>& rows);

// ---- Tracking with a fixed receiver + bound validity ----------------------

struct TrackingResult {
  tracker::RmseSeries rmse;
  std::vector<bounds::BoundValue> bound_pos;  // per-step Ipcrlb position trace
  std::vector<double> bound_full;             // per-step full trace
};

TrackingResult run_tracking(const config::Scenario& s, int threads = 0);
csv::Table tracking_table(const TrackingResult& r);

// ---- Case 3: closed-loop receiver trajectory control ----------------------

struct PolicyStepStats {
  double rx_x = 0, rx_y = 0;  // mean receiver position across runs
  double pd_mean = 0, pd_std = 0;
  double sigma_d_mean = 0, sigma_d_std = 0;
  double sigma_v_mean = 0, sigma_v_std = 0;
  double sigma_theta_mean = 0, sigma_theta_std = 0;
};

struct ClosedLoopResult {
  std::vector<control::ControlPolicy> policies;
  std::vector<tracker::RmseSeries> rmse;                // [policy]
  std::vector<std::vector<PolicyStepStats>> stats;      // [policy][step]
};

ClosedLoopResult run_closed_loop(const config::Scenario& s, int threads = 0);
csv::Table closed_loop_table(const ClosedLoopResult& r);

}  // namespace bistatic::sim
