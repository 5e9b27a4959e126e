#include "bistatic/sim.hpp"

#include <cmath>

#include "bistatic/errors.hpp"
#include "bistatic/geometry.hpp"
#include "bistatic/parallel.hpp"

namespace bistatic::sim {

namespace {

using config::Scenario;
using config::SweepVariable;

Mat4 prior_information(const Scenario& s) {
  Vec4 d;
  d << 1.0 / (s.prior_pos_std * s.prior_pos_std),
      1.0 / (s.prior_pos_std * s.prior_pos_std),
      1.0 / (s.prior_vel_std * s.prior_vel_std),
      1.0 / (s.prior_vel_std * s.prior_vel_std);
  return d.asDiagonal();
}

Mat4 prior_covariance(const Scenario& s) {
  Vec4 d;
  d << s.prior_pos_std * s.prior_pos_std, s.prior_pos_std * s.prior_pos_std,
      s.prior_vel_std * s.prior_vel_std, s.prior_vel_std * s.prior_vel_std;
  return d.asDiagonal();
}

bounds::FimState prior_fim(const Scenario& s) {
  bounds::FimState f;
  f.J = prior_information(s);
  f.F = s.motion.F;
  f.Q = s.motion.Q;
  return f;
}

// Scene at one sweep grid point: swept geometry or swept signal constant.
struct SweepPoint {
  KinematicState target;
  tmu::SignalModel sig;
};

SweepPoint sweep_point(const Scenario& s, double value) {
  SweepPoint p;
  p.sig = s.signal;
  switch (s.sweep.variable) {
    case SweepVariable::kTheta:
      p.target = sweep_target(s, s.sweep.fixed_r_r, value);
      break;
    case SweepVariable::kRangeRx:
      p.target = sweep_target(s, value, s.sweep.fixed_theta);
      break;
    case SweepVariable::kPfa:
      p.target = sweep_target(s, s.sweep.fixed_r_r, s.sweep.fixed_theta);
      p.sig.p_fa = value;
      break;
    case SweepVariable::kVartheta0:
      p.target = sweep_target(s, s.sweep.fixed_r_r, s.sweep.fixed_theta);
      p.sig.vartheta0 = value;
      break;
  }
  return p;
}

struct Welford {
  double n = 0, mean = 0, m2 = 0;
  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double std() const { return n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0; }
};

}  // namespace

KinematicState sweep_target(const Scenario& s, double r_r, double theta) {
  KinematicState t;
  const Vec2 u(std::cos(theta), std::sin(theta));
  t.pos = s.rx.pos + r_r * u;
  const Vec2 dir = s.sweep.radial_motion ? u : Vec2(-u(1), u(0));
  t.vel = s.sweep.target_speed * dir;
  return t;
}

std::vector<TmuRow> run_tmu_sweep(const Scenario& s) {
  std::vector<TmuRow> rows;
  rows.reserve(s.sweep.grid.size());
  for (double value : s.sweep.grid) {
    const SweepPoint p = sweep_point(s, value);
    const auto geom = geometry::build_geometry(p.target, s.tx, s.rx);
    const double psi = tmu::snr(geom.R_T, geom.R_R, p.sig.vartheta0);
    const tmu::MeasCov r = tmu::meas_cov_assumption1(p.sig, psi);
    TmuRow row;
    row.value = value;
    row.sigma_d = std::sqrt(r(0, 0));
    row.sigma_v = std::sqrt(r(1, 1));
    row.sigma_theta = std::sqrt(r(2, 2));
    row.pd = tmu::detection_probability(psi, p.sig.p_fa);
    rows.push_back(row);
  }
  return rows;
}

csv::Table tmu_sweep_table(const Scenario& s, const std::vector<TmuRow>& rows) {
  csv::Table t;
  t.columns = {"sweep_var", "value", "sigma_d_m", "sigma_v_mps",
               "sigma_theta_rad", "pd"};
  const std::string var = config::to_string(s.sweep.variable);
  for (const TmuRow& r : rows) {
    t.add_row({var, r.value, r.sigma_d, r.sigma_v, r.sigma_theta, r.pd});
  }
  return t;
}

std::vector<Assumption1Row> run_assumption1(const Scenario& s) {
  if (s.sweep.variable != SweepVariable::kTheta) {
    throw ConfigError("assumption-1 validation expects a theta sweep");
  }
  std::vector<Assumption1Row> rows;
  rows.reserve(s.sweep.grid.size());
  for (double theta : s.sweep.grid) {
    const KinematicState target = sweep_target(s, s.sweep.fixed_r_r, theta);
    const auto geom = geometry::build_geometry(target, s.tx, s.rx);
    const double psi = tmu::snr(geom.R_T, geom.R_R, s.signal.vartheta0);
    // Worst-case velocity orientation: speed along the bistatic bisector.
    const double rho =
        geometry::dxi_dd(geom, s.sweep.target_speed, 0.0, s.signal.f_c);
    const tmu::MeasCov general = tmu::meas_cov_general(s.signal, psi, rho);
    const tmu::MeasCov approx = tmu::meas_cov_assumption1(s.signal, psi);
    Assumption1Row row;
    row.theta = theta;
    row.dxi_dd = rho;
    row.sigma_v_general = std::sqrt(general(1, 1));
    row.sigma_v_assumption1 = std::sqrt(approx(1, 1));
    row.rel_diff = std::abs(row.sigma_v_general - row.sigma_v_assumption1) /
                   row.sigma_v_assumption1;
    rows.push_back(row);
  }
  return rows;
}

csv::Table assumption1_table(const std::vector<Assumption1Row>& rows) {
  csv::Table t;
  t.columns = {"theta_rad", "dxi_dd_hz_per_m", "sigma_v_general_mps",
               "sigma_v_assumption1_mps", "rel_diff"};
  for (const auto& r : rows) {
    t.add_row({r.theta, r.dxi_dd, r.sigma_v_general, r.sigma_v_assumption1,
               r.rel_diff});
  }
  return t;
}

std::vector<BoundRow> run_bound_comparison(const Scenario& s, int threads) {
  std::vector<BoundRow> rows(s.sweep.grid.size());
  const bounds::FimState prior = prior_fim(s);
  parallel_for(s.sweep.grid.size(), threads, [&](size_t i) {
    const double value = s.sweep.grid[i];
    const SweepPoint p = sweep_point(s, value);
    const auto pt = bounds::make_eval_point(p.target, s.tx, s.rx, p.sig, s.clut);
    bounds::McIntegralConfig cfg = s.mc;
    cfg.g = s.clut.g;
    cfg.seed = RngStream::derive_seed(s.seed, {kTagBoundEval, i});
    BoundRow row;
    row.value = value;
    for (const auto variant : s.variants) {
      const auto info = bounds::measurement_info(pt, variant, cfg);
      const auto fim = bounds::fim_step(prior, info.J_z);
      row.traces.push_back(bounds::bound_trace_with_se(fim, info));
    }
    rows[i] = std::move(row);
  });
  return rows;
}

csv::Table bound_comparison_table(const Scenario& s,
                                  const std::vector<BoundRow>& rows) {
  csv::Table t;
  t.columns = {"sweep_var", "value"};
  for (const auto variant : s.variants) {
    t.columns.push_back(std::string("trace_") + bounds::to_string(variant));
    t.columns.push_back(std::string("std_") + bounds::to_string(variant));
  }
  const std::string var = config::to_string(s.sweep.variable);
  for (const BoundRow& r : rows) {
    std::vector<csv::Cell> row{var, r.value};
    for (const auto& bv : r.traces) {
      row.emplace_back(bv.trace);
      row.emplace_back(bv.se);
    }
    t.add_row(std::move(row));
  }
  return t;
}

namespace {

// Shared by the fixed-receiver tracking study and the closed loop: one
// EKF-PDA step against measurements generated at the true state. Pd and R
// fed to the filter are evaluated at the predicted state. A step whose
// update is unusable (degenerate geometry) keeps the prediction.
tracker::TrackEstimate tracked_update(const tracker::TrackEstimate& predicted,
                                      const KinematicState& truth,
                                      const KinematicState& tx,
                                      const KinematicState& rx,
                                      const Scenario& s,
                                      const tmu::SignalModel& sig,
                                      RngStream& meas_rng) {
  const auto z = clutter::generate_measurements(meas_rng, truth, tx, rx, sig, s.clut);
  try {
    const KinematicState pred_state = KinematicState::from_vec(predicted.mean);
    const auto geom = geometry::build_geometry(pred_state, tx, rx);
    const double psi = tmu::snr(geom.R_T, geom.R_R, sig.vartheta0);
    const double pd = tmu::detection_probability(psi, sig.p_fa);
    const tmu::MeasCov r = tmu::meas_cov_assumption1(sig, psi);
    return tracker::pda_update(predicted, z, r, pd, s.clut, tx, rx);
  } catch (const Error&) {
    return predicted;
  }
}

Vec4 draw_state(RngStream& rng, const Vec4& mean, const Vec4& stds) {
  Vec4 x = mean;
  for (int i = 0; i < 4; ++i) x(i) += stds(i) * rng.normal();
  return x;
}

Vec4 process_noise(RngStream& rng, const Mat4& q) {
  const Eigen::LLT<Mat4> llt(q + 1e-15 * Mat4::Identity());
  Vec4 w;
  for (int i = 0; i < 4; ++i) w(i) = rng.normal();
  return llt.matrixL() * w;
}

}  // namespace

TrackingResult run_tracking(const Scenario& s, int threads) {
  TrackingResult out;
  const int steps = s.horizon + 1;

  // Bound recursion along the noise-free mean trajectory.
  {
    bounds::FimState fim = prior_fim(s);
    Vec4 mean = s.target.vec();
    out.bound_pos.push_back({prior_covariance(s).topLeftCorner<2, 2>().trace(), 0.0});
    out.bound_full.push_back(prior_covariance(s).trace());
    for (int k = 1; k < steps; ++k) {
      mean = s.motion.F * mean;
      const auto pt = bounds::make_eval_point(KinematicState::from_vec(mean),
                                              s.tx, s.rx, s.signal, s.clut);
      bounds::McIntegralConfig cfg = s.mc;
      cfg.g = s.clut.g;
      cfg.seed = RngStream::derive_seed(s.seed, {kTagBoundEval, (uint64_t)k});
      const auto info =
          bounds::measurement_info(pt, bounds::BoundVariant::kIpcrlb, cfg);
      fim = bounds::fim_step(fim, info.J_z);
      out.bound_pos.push_back(bounds::bound_trace_with_se(fim, info, true));
      out.bound_full.push_back(bounds::bound_trace(fim));
    }
  }

  const Vec4 prior_stds(s.prior_pos_std, s.prior_pos_std, s.prior_vel_std,
                        s.prior_vel_std);
  std::vector<tracker::RunErrors> runs(s.runs);
  parallel_for(s.runs, threads, [&](size_t r) {
    RngStream init_rng = RngStream::from_key(s.seed, {kTagInit, r});
    RngStream truth_rng = RngStream::from_key(s.seed, {kTagTruth, r});
    Vec4 truth = s.target.vec();
    tracker::TrackEstimate track;
    track.mean = draw_state(init_rng, truth, prior_stds);
    track.cov = prior_covariance(s);

    tracker::RunErrors errs;
    errs.pos_sq.reserve(steps);
    errs.vel_sq.reserve(steps);
    auto record = [&](const Vec4& est, const Vec4& tru) {
      const double pe = (est.head<2>() - tru.head<2>()).squaredNorm();
      errs.pos_sq.push_back(pe);
      errs.vel_sq.push_back((est.tail<2>() - tru.tail<2>()).squaredNorm());
      if (pe > 100.0 * s.prior_pos_std * s.prior_pos_std) errs.diverged = true;
    };
    record(track.mean, truth);
    for (int k = 1; k < steps; ++k) {
      truth = s.motion.F * truth + process_noise(truth_rng, s.motion.Q);
      const auto predicted = tracker::predict(track, s.motion);
      RngStream meas_rng =
          RngStream::from_key(s.seed, {kTagMeasurement, r, (uint64_t)k});
      track = tracked_update(predicted, KinematicState::from_vec(truth), s.tx,
                             s.rx, s, s.signal, meas_rng);
      record(track.mean, truth);
    }
    runs[r] = std::move(errs);
  });
  out.rmse = tracker::rmse(runs);
  return out;
}

csv::Table tracking_table(const TrackingResult& r) {
  csv::Table t;
  t.columns = {"step", "pos_rmse", "vel_rmse", "pos_mse", "pos_mse_se",
               "ipcrlb_pos", "ipcrlb_pos_se", "ipcrlb_full", "diverged_runs"};
  for (size_t k = 0; k < r.rmse.pos.size(); ++k) {
    t.add_row({static_cast<double>(k), r.rmse.pos[k], r.rmse.vel[k],
               r.rmse.pos_mse[k], r.rmse.pos_mse_se[k], r.bound_pos[k].trace,
               r.bound_pos[k].se, r.bound_full[k],
               static_cast<double>(r.rmse.diverged_runs)});
  }
  return t;
}

namespace {

struct RunTrace {
  tracker::RunErrors errs;
  std::vector<double> rx_x, rx_y, pd, sd, sv, st;
};

RunTrace closed_loop_run(const Scenario& s, control::ControlPolicy policy,
                         size_t r) {
  const int steps = s.horizon + 1;
  const Vec4 prior_stds(s.prior_pos_std, s.prior_pos_std, s.prior_vel_std,
                        s.prior_vel_std);
  RngStream init_rng = RngStream::from_key(s.seed, {kTagInit, r});
  RngStream truth_rng = RngStream::from_key(s.seed, {kTagTruth, r});
  RngStream policy_rng = RngStream::from_key(s.seed, {kTagPolicy, r});

  Vec4 truth = s.target.vec();
  tracker::TrackEstimate track;
  track.mean = draw_state(init_rng, truth, prior_stds);
  track.cov = prior_covariance(s);
  bounds::FimState fim = prior_fim(s);
  KinematicState rx = s.rx;
  control::ControlCommand prev_cmd{s.limits.v_min, s.control_initial_heading};

  const bool needs_fim = policy == control::ControlPolicy::kMinTrIpcrlb ||
                         policy == control::ControlPolicy::kMinTrPcrlb;
  const auto variant = policy == control::ControlPolicy::kMinTrPcrlb
                           ? bounds::BoundVariant::kPcrlb
                           : bounds::BoundVariant::kIpcrlb;

  RunTrace out;
  auto record = [&](const Vec4& est, const Vec4& tru, const KinematicState& rxs) {
    const double pe = (est.head<2>() - tru.head<2>()).squaredNorm();
    out.errs.pos_sq.push_back(pe);
    out.errs.vel_sq.push_back((est.tail<2>() - tru.tail<2>()).squaredNorm());
    if (pe > 100.0 * s.prior_pos_std * s.prior_pos_std) out.errs.diverged = true;
    out.rx_x.push_back(rxs.pos(0));
    out.rx_y.push_back(rxs.pos(1));
    const auto geom =
        geometry::build_geometry(KinematicState::from_vec(tru), s.tx, rxs);
    const double psi = tmu::snr(geom.R_T, geom.R_R, s.signal.vartheta0);
    const tmu::MeasCov rr = tmu::meas_cov_assumption1(s.signal, psi);
    out.pd.push_back(tmu::detection_probability(psi, s.signal.p_fa));
    out.sd.push_back(std::sqrt(rr(0, 0)));
    out.sv.push_back(std::sqrt(rr(1, 1)));
    out.st.push_back(std::sqrt(rr(2, 2)));
  };
  record(track.mean, truth, rx);

  for (int k = 1; k < steps; ++k) {
    truth = s.motion.F * truth + process_noise(truth_rng, s.motion.Q);
    const auto predicted = tracker::predict(track, s.motion);

    control::ControlContext ctx;
    ctx.predicted = predicted;
    ctx.fim_prev = fim;
    ctx.rx = rx;
    ctx.tx = s.tx;
    ctx.sig = s.signal;
    ctx.clut = s.clut;
    ctx.mc = s.control_mc;
    ctx.mc.g = s.clut.g;
    ctx.mc.seed = RngStream::derive_seed(s.seed, {kTagControlCost, r, (uint64_t)k});
    ctx.T = s.motion.T;
    ctx.position_only_cost = s.position_only_cost;
    const auto step =
        control::control_step(policy, ctx, prev_cmd, s.limits, s.motion.T, policy_rng);
    rx = step.rx;
    prev_cmd = step.cmd;

    RngStream meas_rng =
        RngStream::from_key(s.seed, {kTagMeasurement, r, (uint64_t)k});
    track = tracked_update(predicted, KinematicState::from_vec(truth), s.tx, rx,
                           s, s.signal, meas_rng);

    if (needs_fim) {
      try {
        const auto pt = bounds::make_eval_point(
            KinematicState::from_vec(predicted.mean), s.tx, rx, s.signal, s.clut);
        const auto info = bounds::measurement_info(pt, variant, ctx.mc);
        fim = bounds::fim_step(fim, info.J_z);
      } catch (const Error&) {
        // keep previous information state on degenerate geometry
      }
    }
    record(track.mean, truth, rx);
  }
  return out;
}

}  // namespace

ClosedLoopResult run_closed_loop(const Scenario& s, int threads) {
  ClosedLoopResult out;
  out.policies = s.policies;
  const int steps = s.horizon + 1;
  for (const auto policy : s.policies) {
    std::vector<RunTrace> traces(s.runs);
    parallel_for(s.runs, threads,
                 [&](size_t r) { traces[r] = closed_loop_run(s, policy, r); });
    std::vector<tracker::RunErrors> errs;
    errs.reserve(s.runs);
    for (auto& t : traces) errs.push_back(t.errs);
    out.rmse.push_back(tracker::rmse(errs));

    std::vector<PolicyStepStats> stats(steps);
    for (int k = 0; k < steps; ++k) {
      Welford rx_x, rx_y, pd, sd, sv, st;
      for (const auto& t : traces) {
        rx_x.add(t.rx_x[k]);
        rx_y.add(t.rx_y[k]);
        pd.add(t.pd[k]);
        sd.add(t.sd[k]);
        sv.add(t.sv[k]);
        st.add(t.st[k]);
      }
      PolicyStepStats& ps = stats[k];
      ps.rx_x = rx_x.mean;
      ps.rx_y = rx_y.mean;
      ps.pd_mean = pd.mean;
      ps.pd_std = pd.std();
      ps.sigma_d_mean = sd.mean;
      ps.sigma_d_std = sd.std();
      ps.sigma_v_mean = sv.mean;
      ps.sigma_v_std = sv.std();
      ps.sigma_theta_mean = st.mean;
      ps.sigma_theta_std = st.std();
    }
    out.stats.push_back(std::move(stats));
  }
  return out;
}

csv::Table closed_loop_table(const ClosedLoopResult& r) {
  csv::Table t;
  t.columns = {"step",       "policy",       "rx_x",          "rx_y",
               "pos_rmse",   "vel_rmse",     "pd_mean",       "pd_std",
               "sigma_d_mean", "sigma_d_std", "sigma_v_mean", "sigma_v_std",
               "sigma_theta_mean", "sigma_theta_std"};
  if (r.policies.empty()) return t;
  const size_t steps = r.rmse.front().pos.size();
  for (size_t k = 0; k < steps; ++k) {
    for (size_t p = 0; p < r.policies.size(); ++p) {
      const auto& st = r.stats[p][k];
      t.add_row({static_cast<double>(k), control::to_string(r.policies[p]),
                 st.rx_x, st.rx_y, r.rmse[p].pos[k], r.rmse[p].vel[k],
                 st.pd_mean, st.pd_std, st.sigma_d_mean, st.sigma_d_std,
                 st.sigma_v_mean, st.sigma_v_std, st.sigma_theta_mean,
                 st.sigma_theta_std});
    }
  }
  return t;
}

}  // namespace bistatic::sim
