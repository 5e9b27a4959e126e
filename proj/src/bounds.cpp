#include "bistatic/bounds.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "bistatic/errors.hpp"
#include "bistatic/geometry.hpp"

namespace bistatic::bounds {

namespace {
constexpr int kDim = 3;  // measurement dimension (d, v, theta)

double sq(double x) { return x * x; }
}  // namespace

const char* to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::kIpcrlb: return "ipcrlb";
    case BoundVariant::kEfim: return "efim";
    case BoundVariant::kPcrlb: return "pcrlb";
  }
  return "?";
}

std::pair<double, double> gate_detection_quantities(double pd, double lambda_vg,
                                                    int m) {
  if (m < 1) throw DomainError("gate quantities: m must be at least 1");
  const double ell = (1.0 - pd) * lambda_vg + m * pd;
  const double d_g = ell > 0.0 ? m * pd / ell : 0.0;
  return {d_g, ell};
}

GateFactors make_gate_factors(const GateContext& ctx, int m) {
  GateFactors f;
  f.m = m;
  f.g = ctx.g;
  auto [d_g, ell] = gate_detection_quantities(ctx.pd, ctx.lambda_vg, m);
  f.d_g = d_g;
  f.ell_g = ell;
  f.phi_scale = std::pow(2.0 * ctx.g, kDim) / std::pow(kTwoPi, kDim / 2.0);
  if (ell > 0.0) {
    const double log_pfa = std::log(ctx.p_fa);
    const double one_psi = 1.0 + ctx.psi;
    f.coeff_detection = sq(ctx.lambda_vg) * sq(m) * sq(ctx.pd) * sq(log_pfa) /
                        (sq(sq(ell)) * sq(sq(one_psi)));
    f.coeff_cross = d_g * ctx.lambda_vg * ctx.pd * log_pfa /
                    (ctx.psi * sq(ell) * sq(one_psi));
    f.coeff_cov = sq(d_g) / (4.0 * sq(ctx.psi) * sq(m));
  }
  return f;
}

namespace {

// (1 - d_g) + (d_g/m) sum_i phi(z_i): the normalized conditional likelihood
// of the whole measurement set.
double likelihood_hat(const GateFactors& f, const Vec3* z) {
  double sum = 0.0;
  for (int i = 0; i < f.m; ++i) sum += std::exp(-0.5 * z[i].squaredNorm());
  return (1.0 - f.d_g) + f.d_g / f.m * f.phi_scale * sum;
}

}  // namespace

double irf_integrand(const GateFactors& f, const Vec3* z) {
  const double phi1 = f.phi_scale * std::exp(-0.5 * z[0].squaredNorm());
  return sq(f.d_g) / f.m * sq(z[0](0)) * sq(phi1) / likelihood_hat(f, z);
}

double igf_integrand(const GateFactors& f, const Vec3* z,
                     bool detection_term_only) {
  const double m = f.m;
  const double gamma1 = z[0].squaredNorm();
  const double phi1 = f.phi_scale * std::exp(-0.5 * gamma1);

  double gamma2 = 0.0, phi2 = 0.0;
  if (f.m >= 2) {
    gamma2 = z[1].squaredNorm();
    phi2 = f.phi_scale * std::exp(-0.5 * gamma2);
  }

  const double det_term =
      (sq(phi1) + (m - 1.0) * phi1 * phi2) / m - 2.0 * phi1 + 1.0;
  double val = f.coeff_detection * det_term;
  if (!detection_term_only) {
    const double g1n = gamma1 - kDim, g2n = gamma2 - kDim;
    const double cross_term =
        phi1 * g1n * (phi1 - m) + (m - 1.0) * phi1 * phi2 * g2n;
    const double cov_term = m * (m - 1.0) * phi1 * phi2 * g1n * g2n +
                            m * sq(phi1) * sq(g1n);
    val += f.coeff_cross * cross_term + f.coeff_cov * cov_term;
  }
  return val / likelihood_hat(f, z);
}

namespace {

McEstimate run_mc(int n_samples, const std::function<double(RngStream&)>& draw,
                  RngStream& rng) {
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double v = draw(rng);
    sum += v;
    sum2 += v * v;
  }
  McEstimate e;
  e.mean = sum / n_samples;
  if (n_samples > 1) {
    const double var = (sum2 - sum * sum / n_samples) / (n_samples - 1);
    e.se = std::sqrt(std::max(var, 0.0) / n_samples);
  }
  return e;
}

Vec3 draw_cube(RngStream& rng, double g) {
  return Vec3(rng.uniform(-g, g), rng.uniform(-g, g), rng.uniform(-g, g));
}

}  // namespace

McEstimate irf_lambda1(const GateContext& ctx, int m, const McIntegralConfig& cfg,
                       RngStream rng) {
  const GateFactors f = make_gate_factors(ctx, m);
  if (f.d_g == 0.0) return {0.0, 0.0};
  std::vector<Vec3> z(m);
  return run_mc(
      cfg.n_samples,
      [&](RngStream& r) {
        for (int i = 0; i < m; ++i) z[i] = draw_cube(r, ctx.g);
        return irf_integrand(f, z.data());
      },
      rng);
}

McEstimate igf_lambda2(const GateContext& ctx, int m, bool detection_term_only,
                       const McIntegralConfig& cfg, RngStream rng) {
  const GateFactors f = make_gate_factors(ctx, m);
  if (f.ell_g <= 0.0) return {0.0, 0.0};
  std::vector<Vec3> z(m);
  return run_mc(
      cfg.n_samples,
      [&](RngStream& r) {
        for (int i = 0; i < m; ++i) z[i] = draw_cube(r, ctx.g);
        return igf_integrand(f, z.data(), detection_term_only);
      },
      rng);
}

EvalPoint make_eval_point(const KinematicState& target, const KinematicState& tx,
                          const KinematicState& rx, const tmu::SignalModel& sig,
                          const clutter::ClutterModel& clut) {
  const auto geom = geometry::build_geometry(target, tx, rx);
  EvalPoint pt;
  pt.gate.psi = tmu::snr(geom.R_T, geom.R_R, sig.vartheta0);
  pt.gate.pd = tmu::detection_probability(pt.gate.psi, sig.p_fa);
  pt.gate.p_fa = sig.p_fa;
  pt.gate.g = clut.g;
  pt.R = tmu::meas_cov_assumption1(sig, pt.gate.psi);
  pt.vg = clutter::gate_volume(pt.R, clut.g);
  pt.gate.lambda_vg = clut.lambda * pt.vg;
  pt.H = clutter::measurement_jacobian(target, tx, rx);
  pt.snr_grad = tmu::snr_gradient(target, tx.pos, rx.pos, sig.vartheta0);
  return pt;
}

namespace {

// The two factors of one m-term, honoring the validation hooks and the
// per-(seed, purpose, m) substream contract.
InfoTerm eval_term(const EvalPoint& pt, int m, BoundVariant variant,
                   const McIntegralConfig& cfg) {
  InfoTerm term;
  term.m = m;
  term.weight = clutter::cardinality_probability(pt.gate.pd, pt.gate.lambda_vg, m);
  if (cfg.force_lambda1) {
    term.lambda1 = {*cfg.force_lambda1, 0.0};
  } else {
    term.lambda1 = irf_lambda1(pt.gate, m, cfg,
                               RngStream::from_key(cfg.seed, {kTagIrf, (uint64_t)m}));
  }
  if (variant != BoundVariant::kPcrlb) {
    if (cfg.force_lambda2) {
      term.lambda2 = {*cfg.force_lambda2, 0.0};
    } else {
      const bool detection_only =
          variant == BoundVariant::kEfim || cfg.igf_detection_only;
      term.lambda2 = igf_lambda2(pt.gate, m, detection_only, cfg,
                                 RngStream::from_key(cfg.seed, {kTagIgf, (uint64_t)m}));
    }
  }
  return term;
}

Mat4 symmetrized(const Mat4& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Mat4 conditional_info_matrix(const EvalPoint& pt, int m, BoundVariant variant,
                             const McIntegralConfig& cfg) {
  const Mat4 m1 = pt.H.transpose() * pt.R.llt().solve(Mat3::Identity()) * pt.H;
  const Vec4 grad = cfg.zero_snr_gradient ? Vec4::Zero() : pt.snr_grad;
  const Mat4 m2 = grad * grad.transpose();
  const InfoTerm term = eval_term(pt, m, variant, cfg);
  return symmetrized(term.lambda1.mean * m1 + term.lambda2.mean * m2);
}

MeasurementInfo measurement_info(const EvalPoint& pt, BoundVariant variant,
                                 const McIntegralConfig& cfg) {
  MeasurementInfo info;
  info.M1 = pt.H.transpose() * pt.R.llt().solve(Mat3::Identity()) * pt.H;
  const Vec4 grad = cfg.zero_snr_gradient ? Vec4::Zero() : pt.snr_grad;
  info.M2 = grad * grad.transpose();
  for (int m = 1; m <= cfg.m_max; ++m) {
    const InfoTerm term = eval_term(pt, m, variant, cfg);
    info.J_z += term.weight *
                (term.lambda1.mean * info.M1 + term.lambda2.mean * info.M2);
    info.terms.push_back(term);
  }
  info.J_z = symmetrized(info.J_z);
  return info;
}

Mat4 spd_inverse(const Mat4& m) {
  if (!m.allFinite()) throw SingularityError("spd_inverse: non-finite matrix");
  Eigen::LDLT<Mat4> ldlt(m);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const Mat4 inv = ldlt.solve(Mat4::Identity());
    if (inv.allFinite()) return symmetrized(inv);
  }
  const double ridge = 1e-12 * m.trace() / 4.0;
  Mat4 r = m + std::abs(ridge) * Mat4::Identity();
  Eigen::LDLT<Mat4> ldlt2(r);
  if (ldlt2.info() != Eigen::Success) {
    throw SingularityError("spd_inverse: matrix not invertible");
  }
  const Mat4 inv = ldlt2.solve(Mat4::Identity());
  if (!inv.allFinite()) throw SingularityError("spd_inverse: non-finite inverse");
  return symmetrized(inv);
}

FimState fim_step(const FimState& prev, const Mat4& j_z) {
  FimState next = prev;
  const Mat4 predicted_cov =
      prev.Q + prev.F * spd_inverse(prev.J) * prev.F.transpose();
  next.J = symmetrized(spd_inverse(predicted_cov) + j_z);
  next.k = prev.k + 1;
  return next;
}

double bound_trace(const FimState& fim) { return spd_inverse(fim.J).trace(); }

double bound_trace_position(const FimState& fim) {
  return spd_inverse(fim.J).topLeftCorner<2, 2>().trace();
}

BoundValue bound_trace_with_se(const FimState& fim, const MeasurementInfo& info,
                               bool position_only) {
  const Mat4 ji = spd_inverse(fim.J);
  BoundValue out;
  out.trace = position_only ? ji.topLeftCorner<2, 2>().trace() : ji.trace();
  // d tr(E J^-1) / d lambda = -w tr(E J^-1 M J^-1) for each factor.
  const Mat4 s1 = ji * info.M1 * ji;
  const Mat4 s2 = ji * info.M2 * ji;
  const double t1 = position_only ? s1.topLeftCorner<2, 2>().trace() : s1.trace();
  const double t2 = position_only ? s2.topLeftCorner<2, 2>().trace() : s2.trace();
  double var = 0.0;
  for (const InfoTerm& term : info.terms) {
    var += sq(term.weight) *
           (sq(t1 * term.lambda1.se) + sq(t2 * term.lambda2.se));
  }
  out.se = std::sqrt(var);
  return out;
}

}  // namespace bistatic::bounds
