#pragma once

#include <optional>
#include <vector>

#include "bistatic/clutter.hpp"
#include "bistatic/rng.hpp"
#include "bistatic/tmu.hpp"
#include "bistatic/types.hpp"

namespace bistatic::bounds {

// Which measurement-information model feeds the recursion:
//  - Pcrlb: origin uncertainty only; the SNR-gradient term is dropped.
//  - Efim: detection probability treated as state-dependent (the IGF keeps
//    only its detection-gradient part).
//  - Ipcrlb: detection probability and measurement covariance both treated as
//    state-dependent (full IGF).
enum class BoundVariant { kIpcrlb, kEfim, kPcrlb };

const char* to_string(BoundVariant v);

// Recursive Fisher information state with its propagation model.
struct FimState {
  Mat4 J = Mat4::Zero();
  Mat4 F = Mat4::Identity();
  Mat4 Q = Mat4::Zero();
  int k = 0;
};

// Monte Carlo settings for the gate integrals, plus validation hooks used by
// the reduction-identity tests.
struct McIntegralConfig {
  int n_samples = 20000;  // per (m, integral)
  int m_max = 3;          // truncation of the measurement-count sum
  double g = 4.0;         // gate size, must match the clutter model
  uint64_t seed = 0;

  std::optional<double> force_lambda1;  // bypass the IRF estimate
  std::optional<double> force_lambda2;  // bypass the IGF estimate
  bool zero_snr_gradient = false;       // evaluate with dPsi/dx forced to 0
  bool igf_detection_only = false;      // force the IGF cross/covariance terms
                                        // to zero on the Ipcrlb path
};

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

// Scalars describing the gate at one evaluation point.
struct GateContext {
  double psi = 1.0;        // receiver SNR
  double pd = 1.0;         // detection probability
  double p_fa = 1e-3;      // false alarm rate
  double lambda_vg = 0.0;  // expected clutter count in the gate
  double g = 4.0;          // gate size
};

// (d_g, ell_g): gated association probability and its normalizer
//   ell_g = (1 - Pd) lambda V_g + m Pd,   d_g = m Pd / ell_g.
std::pair<double, double> gate_detection_quantities(double pd, double lambda_vg,
                                                    int m);

// The gate integrals are evaluated in normalized coordinates z_hat = z~/sigma
// on the cube [-g, g]^(3m). In these variables every factor is dimensionless:
//
//   phi(z_i) = (2g)^3 (2pi)^(-3/2) exp(-|z_i|^2/2)   (gate-scaled Gaussian)
//   bhat(Z)  = (1 - d_g) + (d_g/m) sum_i phi(z_i)    (conditional measurement-
//                                                     set likelihood times V_g^m)
//
// and both factors below are expectations over Z = (z_1..z_m) with each block
// uniform on [-g, g]^3:
//
//   Lambda^1(m) = E[ irf_integrand(Z) ]
//   Lambda^2(m) = E[ igf_integrand(Z) ]
//
// Permutation symmetry collapses the numerator sums onto the first two
// blocks, but the likelihood in the denominator keeps every block.
struct GateFactors {
  int m = 1;
  double g = 4.0;
  double d_g = 0.0;
  double ell_g = 0.0;
  double coeff_detection = 0.0;  // weight of the squared detection-gradient term
  double coeff_cross = 0.0;      // weight of the detection/covariance cross term
  double coeff_cov = 0.0;        // weight of the squared covariance-gradient term
  double phi_scale = 0.0;        // (2g)^3 (2pi)^(-3/2)
};

GateFactors make_gate_factors(const GateContext& ctx, int m);

// z points at the m normalized measurement blocks.
double irf_integrand(const GateFactors& f, const Vec3* z);
double igf_integrand(const GateFactors& f, const Vec3* z,
                     bool detection_term_only);

// Monte Carlo estimates of the two factors; deterministic given the stream.
// Each sample consumes 3m uniforms (block 1 first, component order d, v,
// theta).
McEstimate irf_lambda1(const GateContext& ctx, int m, const McIntegralConfig& cfg,
                       RngStream rng);
McEstimate igf_lambda2(const GateContext& ctx, int m, bool detection_term_only,
                       const McIntegralConfig& cfg, RngStream rng);

// Everything the measurement-information matrix needs at one state.
struct EvalPoint {
  GateContext gate;
  tmu::MeasCov R = tmu::MeasCov::Identity();
  Mat34 H = Mat34::Zero();
  Vec4 snr_grad = Vec4::Zero();
  double vg = 0.0;  // gate volume
};

EvalPoint make_eval_point(const KinematicState& target, const KinematicState& tx,
                          const KinematicState& rx, const tmu::SignalModel& sig,
                          const clutter::ClutterModel& clut);

// One m-term of the measurement-information sum, kept for error propagation.
struct InfoTerm {
  int m = 1;
  double weight = 0.0;  // cardinality probability of m
  McEstimate lambda1;
  McEstimate lambda2;
};

struct MeasurementInfo {
  Mat4 J_z = Mat4::Zero();
  Mat4 M1 = Mat4::Zero();  // H^T R^-1 H
  Mat4 M2 = Mat4::Zero();  // (dPsi/dx)(dPsi/dx)^T
  std::vector<InfoTerm> terms;
};

// Conditional measurement information matrix for a fixed measurement count:
//   Lambda^1 H^T R^-1 H + Lambda^2 (dPsi/dx)(dPsi/dx)^T
// (second term omitted for Pcrlb). Symmetrized on output.
Mat4 conditional_info_matrix(const EvalPoint& pt, int m, BoundVariant variant,
                             const McIntegralConfig& cfg);

// Expected measurement information: the conditional matrices weighted by the
// cardinality probabilities for m = 1..m_max, evaluated at the given state.
MeasurementInfo measurement_info(const EvalPoint& pt, BoundVariant variant,
                                 const McIntegralConfig& cfg);

// One Riccati-like information recursion step:
//   J_k = (Q + F J_{k-1}^-1 F^T)^-1 + J_z.
// Throws SingularityError when the previous information matrix cannot be
// inverted even after ridge regularization.
FimState fim_step(const FimState& prev, const Mat4& j_z);

// trace(J^-1); the position-only variant sums the first two diagonal entries.
double bound_trace(const FimState& fim);
double bound_trace_position(const FimState& fim);

struct BoundValue {
  double trace = 0.0;
  double se = 0.0;
};

// Bound trace with its Monte Carlo standard error, propagated from the
// per-term factor errors by linearization of tr(J^-1).
BoundValue bound_trace_with_se(const FimState& fim, const MeasurementInfo& info,
                               bool position_only = false);

// Symmetric positive-(semi)definite inverse with a ridge fallback of
// 1e-12 * trace/4.
Mat4 spd_inverse(const Mat4& m);

}  // namespace bistatic::bounds
