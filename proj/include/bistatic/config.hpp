#pragma once

#include <string>
#include <vector>

#include "bistatic/bounds.hpp"
#include "bistatic/clutter.hpp"
#include "bistatic/control.hpp"
#include "bistatic/tmu.hpp"
#include "bistatic/types.hpp"

namespace bistatic::config {

enum class SweepVariable { kTheta, kRangeRx, kPfa, kVartheta0 };

const char* to_string(SweepVariable v);

// One swept scene variable with the frozen remainder of the geometry. The
// target is placed at range r_r and look angle theta from the receiver;
// its velocity is tangential (generating DOA motion) or radial (generating
// range motion) at the given speed.
struct SweepSpec {
  static std::vector<double> make_grid(double from, double to, double step);

  SweepVariable variable = SweepVariable::kTheta;
  // strictly monotone, nonempty; defaults to the 2-degree DOA grid
  std::vector<double> grid = make_grid(0.0, kTwoPi, 2.0 * kPi / 180.0);
  double fixed_r_r = 2000.0;         // m
  double fixed_theta = kPi / 2.0;    // rad
  double target_speed = 50.0;        // m/s
  bool radial_motion = false;

  void validate() const;
};

// Full experiment description; every field has a runnable default and a JSON
// override. Top-level keys: signal, clutter, target, transmitter, receiver,
// motion, bounds, control, sim. Unknown keys anywhere are rejected with an
// error naming the key.
struct Scenario {
  tmu::SignalModel signal = tmu::SignalModel::atsc();
  clutter::ClutterModel clut{5e-5, 4.0};

  KinematicState target{{0.0, 2000.0}, {50.0, 0.0}};
  KinematicState tx{{-5000.0, 0.0}, {0.0, 0.0}};
  KinematicState rx{{0.0, 0.0}, {0.0, 0.0}};

  MotionModel motion = MotionModel::ncv(1.0, 0.1);

  bounds::McIntegralConfig mc;  // bound-evaluation integrals
  std::vector<bounds::BoundVariant> variants{bounds::BoundVariant::kIpcrlb,
                                             bounds::BoundVariant::kEfim,
                                             bounds::BoundVariant::kPcrlb};
  double prior_pos_std = 100.0;  // m
  double prior_vel_std = 10.0;   // m/s

  control::ManeuverLimits limits;
  std::vector<control::ControlPolicy> policies{
      control::ControlPolicy::kMinTrIpcrlb, control::ControlPolicy::kMinTrPcrlb,
      control::ControlPolicy::kMinPdst, control::ControlPolicy::kFixed,
      control::ControlPolicy::kRandom};
  bounds::McIntegralConfig control_mc = [] {
    bounds::McIntegralConfig c;
    c.n_samples = 600;
    c.m_max = 2;
    return c;
  }();
  double control_initial_heading = 0.0;
  bool position_only_cost = false;

  uint64_t seed = 1;
  int runs = 200;
  int horizon = 30;
  SweepSpec sweep;

  void validate() const;
};

// Parses and validates a scenario file. Throws ConfigError with the offending
// key path on unknown keys, wrong types, or invariant violations; IoError
// when the file cannot be read.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

}  // namespace bistatic::config
