#include "bistatic/control.hpp"

#include <algorithm>
#include <cmath>

#include "bistatic/errors.hpp"

namespace bistatic::control {

const char* to_string(ControlPolicy p) {
  switch (p) {
    case ControlPolicy::kMinTrIpcrlb: return "min_tr_ipcrlb";
    case ControlPolicy::kMinTrPcrlb: return "min_tr_pcrlb";
    case ControlPolicy::kMinPdst: return "min_pdst";
    case ControlPolicy::kFixed: return "fixed";
    case ControlPolicy::kRandom: return "random";
  }
  return "?";
}

ControlPolicy policy_from_string(const std::string& s) {
  if (s == "min_tr_ipcrlb") return ControlPolicy::kMinTrIpcrlb;
  if (s == "min_tr_pcrlb") return ControlPolicy::kMinTrPcrlb;
  if (s == "min_pdst") return ControlPolicy::kMinPdst;
  if (s == "fixed") return ControlPolicy::kFixed;
  if (s == "random") return ControlPolicy::kRandom;
  throw ConfigError("unknown control policy: " + s);
}

std::vector<ControlCommand> command_library(const ControlCommand& prev,
                                            const ManeuverLimits& limits,
                                            double T) {
  if (limits.n_v < 1 || limits.n_w < 1) {
    throw DomainError("command library: n_v, n_w must be at least 1");
  }
  if (!(T > 0.0)) throw DomainError("command library: T must be positive");

  const double v_lo = std::max(limits.v_min, prev.speed - limits.a_v_max * T);
  const double v_hi = std::min(limits.v_max, prev.speed + limits.a_v_max * T);
  if (v_lo > v_hi) throw EmptyLibraryError("command library: speed constraints infeasible");
  const double w_lo = std::max(-limits.w_max, prev.heading - limits.a_w_max * T);
  const double w_hi = std::min(limits.w_max, prev.heading + limits.a_w_max * T);
  if (w_lo > w_hi) throw EmptyLibraryError("command library: heading constraints infeasible");

  std::vector<ControlCommand> lib;
  lib.reserve((limits.n_v + 1) * (limits.n_w + 1));
  for (int i = 0; i <= limits.n_v; ++i) {
    const double v_raw =
        prev.speed - limits.a_v_max * T + i * 2.0 * limits.a_v_max * T / limits.n_v;
    const double v = std::clamp(v_raw, v_lo, v_hi);
    for (int j = 0; j <= limits.n_w; ++j) {
      const double w_raw = prev.heading - limits.a_w_max * T +
                           j * 2.0 * limits.a_w_max * T / limits.n_w;
      const double w = std::clamp(w_raw, w_lo, w_hi);
      lib.push_back({v, w});
    }
  }
  return lib;
}

KinematicState propagate_receiver(const KinematicState& rx,
                                  const ControlCommand& cmd, double T) {
  if (!(T > 0.0)) throw DomainError("propagate_receiver: T must be positive");
  KinematicState out;
  out.vel = Vec2(cmd.speed * std::cos(cmd.heading), cmd.speed * std::sin(cmd.heading));
  out.pos = rx.pos + out.vel * T;
  return out;
}

namespace {

double bound_cost(const ControlContext& ctx, const ControlCommand& cmd,
                  bounds::BoundVariant variant) {
  const KinematicState rx_next = propagate_receiver(ctx.rx, cmd, ctx.T);
  const KinematicState pred = KinematicState::from_vec(ctx.predicted.mean);
  const auto pt = bounds::make_eval_point(pred, ctx.tx, rx_next, ctx.sig, ctx.clut);
  const auto info = bounds::measurement_info(pt, variant, ctx.mc);
  const auto next = bounds::fim_step(ctx.fim_prev, info.J_z);
  return ctx.position_only_cost ? bounds::bound_trace_position(next)
                                : bounds::bound_trace(next);
}

int argmin_index(const std::vector<double>& costs) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(costs.size()); ++i) {
    if (costs[i] < costs[best]) best = i;
  }
  return best;
}

}  // namespace

CommandChoice select_command(ControlPolicy policy, const ControlContext& ctx,
                             const std::vector<ControlCommand>& library,
                             RngStream& rng) {
  if (library.empty()) throw EmptyLibraryError("select_command: empty library");
  CommandChoice choice;
  switch (policy) {
    case ControlPolicy::kMinTrIpcrlb:
    case ControlPolicy::kMinTrPcrlb: {
      const auto variant = policy == ControlPolicy::kMinTrIpcrlb
                               ? bounds::BoundVariant::kIpcrlb
                               : bounds::BoundVariant::kPcrlb;
      choice.costs.reserve(library.size());
      for (const ControlCommand& cmd : library) {
        choice.costs.push_back(bound_cost(ctx, cmd, variant));
      }
      choice.index = argmin_index(choice.costs);
      break;
    }
    case ControlPolicy::kMinPdst: {
      const Vec2 target_pos = ctx.predicted.mean.head<2>();
      choice.costs.reserve(library.size());
      for (const ControlCommand& cmd : library) {
        choice.costs.push_back(
            (propagate_receiver(ctx.rx, cmd, ctx.T).pos - target_pos).norm());
      }
      choice.index = argmin_index(choice.costs);
      break;
    }
    case ControlPolicy::kFixed:
      choice.index = 0;
      break;
    case ControlPolicy::kRandom:
      choice.index = static_cast<int>(rng.below(library.size()));
      break;
  }
  choice.cmd = library[choice.index];
  return choice;
}

ControlStepResult control_step(ControlPolicy policy, const ControlContext& ctx,
                               const ControlCommand& prev_cmd,
                               const ManeuverLimits& limits, double T,
                               RngStream& rng) {
  ControlStepResult out;
  if (policy == ControlPolicy::kFixed) {
    // Non-actuated baseline: the receiver stays put with zero velocity.
    out.rx = ctx.rx;
    out.rx.vel = Vec2::Zero();
    out.cmd = {limits.v_min, prev_cmd.heading};
    return out;
  }
  const auto library = command_library(prev_cmd, limits, T);
  auto choice = select_command(policy, ctx, library, rng);
  out.rx = propagate_receiver(ctx.rx, choice.cmd, T);
  out.cmd = choice.cmd;
  out.costs = std::move(choice.costs);
  return out;
}

}  // namespace bistatic::control
