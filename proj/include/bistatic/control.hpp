#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bistatic/bounds.hpp"
#include "bistatic/rng.hpp"
#include "bistatic/tracker.hpp"
#include "bistatic/types.hpp"

namespace bistatic::control {

// One receiver trajectory command: speed and heading over the next interval.
// Headings are kept unwrapped relative to the previous command so that the
// rate constraint stays a plain interval.
struct ControlCommand {
  double speed = 0.0;    // m/s
  double heading = 0.0;  // rad
};

// Platform maneuver limits. w_max bounds |heading| and defaults to
// unconstrained; a_v_max / a_w_max bound the per-interval change rates.
struct ManeuverLimits {
  double v_min = 1.0;
  double v_max = 100.0;
  double w_max = std::numeric_limits<double>::infinity();
  double a_v_max = 5.0;                  // m/s^2
  double a_w_max = 30.0 * kPi / 180.0;   // rad/s^2
  int n_v = 40;
  int n_w = 20;
};

enum class ControlPolicy {
  kMinTrIpcrlb,  // minimize predicted trace of the Ipcrlb
  kMinTrPcrlb,   // minimize predicted trace of the Pcrlb
  kMinPdst,      // minimize predicted target-to-receiver distance
  kFixed,        // receiver not actuated
  kRandom,       // uniform draw from the command library
};

const char* to_string(ControlPolicy p);
ControlPolicy policy_from_string(const std::string& s);

// Discretized command library around the previous command:
// (n_v+1)(n_w+1) grid candidates, each clamped into the feasible speed and
// heading intervals. Throws EmptyLibraryError when the speed constraints are
// infeasible.
std::vector<ControlCommand> command_library(const ControlCommand& prev,
                                            const ManeuverLimits& limits,
                                            double T);

// Nearly-constant-velocity receiver propagation over one interval.
KinematicState propagate_receiver(const KinematicState& rx,
                                  const ControlCommand& cmd, double T);

// Inputs shared by all candidate evaluations of one control step.
struct ControlContext {
  tracker::TrackEstimate predicted;  // predicted target density at t_k
  bounds::FimState fim_prev;         // information state at t_{k-1}
  KinematicState rx;
  KinematicState tx;
  tmu::SignalModel sig;
  clutter::ClutterModel clut;
  bounds::McIntegralConfig mc;       // one shared seed per step: candidates
                                     // are costed with common random numbers
  double T = 1.0;                    // control interval (s)
  bool position_only_cost = false;
};

struct CommandChoice {
  ControlCommand cmd;
  int index = 0;
  std::vector<double> costs;  // audited per-candidate costs (empty for Fixed)
};

// Selects a command from the library under the given policy; ties break to
// the lowest library index. Deterministic given rng state.
CommandChoice select_command(ControlPolicy policy, const ControlContext& ctx,
                             const std::vector<ControlCommand>& library,
                             RngStream& rng);

struct ControlStepResult {
  KinematicState rx;  // receiver state after actuation
  ControlCommand cmd;
  std::vector<double> costs;
};

// One myopic control step: build the library from the previous command,
// select under the policy, and actuate. The Fixed policy leaves the receiver
// where it is.
ControlStepResult control_step(ControlPolicy policy, const ControlContext& ctx,
                               const ControlCommand& prev_cmd,
                               const ManeuverLimits& limits, double T,
                               RngStream& rng);

}  // namespace bistatic::control
