#include "bistatic/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bistatic/errors.hpp"

namespace bistatic::config {

using nlohmann::json;

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kTheta: return "theta";
    case SweepVariable::kRangeRx: return "r_r";
    case SweepVariable::kPfa: return "p_fa";
    case SweepVariable::kVartheta0: return "vartheta0";
  }
  return "?";
}

std::vector<double> SweepSpec::make_grid(double from, double to, double step) {
  if (!(step > 0.0) || to < from) throw ConfigError("sweep: bad grid bounds");
  std::vector<double> g;
  const int n = static_cast<int>(std::floor((to - from) / step + 0.5));
  for (int i = 0; i <= n; ++i) g.push_back(from + i * step);
  return g;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ConfigError("sweep.grid: empty");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep.grid: not strictly increasing");
  }
  if (!(fixed_r_r > 0.0)) throw ConfigError("sweep.r_r: must be positive");
  if (target_speed < 0.0) throw ConfigError("sweep.target_speed: negative");
}

void Scenario::validate() const {
  signal.validate();
  clut.validate();
  if (mc.n_samples < 1 || control_mc.n_samples < 1) {
    throw ConfigError("bounds.n_samples: must be at least 1");
  }
  if (mc.m_max < 1 || control_mc.m_max < 1) {
    throw ConfigError("bounds.m_max: must be at least 1");
  }
  if (runs < 1) throw ConfigError("sim.runs: must be at least 1");
  if (horizon < 1) throw ConfigError("sim.horizon: must be at least 1");
  if (!(prior_pos_std > 0.0) || !(prior_vel_std > 0.0)) {
    throw ConfigError("bounds.prior std: must be positive");
  }
  if (!(limits.v_min <= limits.v_max)) throw ConfigError("control.v_min exceeds v_max");
  if (!(motion.T > 0.0)) throw ConfigError("motion.T: must be positive");
  sweep.validate();
}

namespace {

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: " + path + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("config: unknown key \"" +
                        (path.empty() ? item.key() : path + "." + item.key()) + "\"");
    }
  }
}

double num(const json& j, const std::string& path, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError("config: " + path + "." + key + " must be a number");
  return j[key].get<double>();
}

int integer(const json& j, const std::string& path, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw ConfigError("config: " + path + "." + key + " must be an integer");
  }
  return j[key].get<int>();
}

bool boolean(const json& j, const std::string& path, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ConfigError("config: " + path + "." + key + " must be a bool");
  return j[key].get<bool>();
}

Vec2 vec2(const json& j, const std::string& path, const char* key, const Vec2& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
    throw ConfigError("config: " + path + "." + key + " must be [x, y]");
  }
  return Vec2(a[0].get<double>(), a[1].get<double>());
}

KinematicState state(const json& root, const char* key, const KinematicState& fallback) {
  if (!root.contains(key)) return fallback;
  const json& j = root[key];
  check_keys(j, key, {"pos", "vel"});
  KinematicState s;
  s.pos = vec2(j, key, "pos", fallback.pos);
  s.vel = vec2(j, key, "vel", fallback.vel);
  return s;
}

void parse_signal(const json& j, Scenario& s) {
  check_keys(j, "signal", {"alpha", "t_sym", "n_symbols", "f_c", "sigma_theta0_deg",
                           "vartheta0", "p_fa"});
  const double alpha = num(j, "signal", "alpha", 0.05762);
  const double t_sym = num(j, "signal", "t_sym", 93e-9);
  const double n_symbols = num(j, "signal", "n_symbols", 1076000.0);
  const auto fim = tmu::atsc_signal_fim(alpha, t_sym, n_symbols);
  s.signal.S1 = fim[0];
  s.signal.S2 = fim[1];
  s.signal.S3 = fim[2];
  s.signal.f_c = num(j, "signal", "f_c", s.signal.f_c);
  s.signal.sigma_theta0 =
      num(j, "signal", "sigma_theta0_deg", s.signal.sigma_theta0 * 180.0 / kPi) * kPi / 180.0;
  s.signal.vartheta0 = num(j, "signal", "vartheta0", s.signal.vartheta0);
  s.signal.p_fa = num(j, "signal", "p_fa", s.signal.p_fa);
}

void parse_clutter(const json& j, Scenario& s) {
  check_keys(j, "clutter", {"lambda", "g", "n_cell", "volume"});
  s.clut.g = num(j, "clutter", "g", s.clut.g);
  if (j.contains("n_cell") || j.contains("volume")) {
    if (j.contains("lambda")) {
      throw ConfigError("config: clutter.lambda conflicts with clutter.n_cell/volume");
    }
    const double n_cell = num(j, "clutter", "n_cell", 0.0);
    const double volume = num(j, "clutter", "volume", 0.0);
    s.clut = clutter::ClutterModel::from_cells(n_cell, s.signal.p_fa, volume, s.clut.g);
  } else {
    s.clut.lambda = num(j, "clutter", "lambda", s.clut.lambda);
  }
}

void parse_bounds(const json& j, Scenario& s) {
  check_keys(j, "bounds", {"n_samples", "m_max", "variants", "prior_pos_std",
                           "prior_vel_std", "seed"});
  s.mc.n_samples = integer(j, "bounds", "n_samples", s.mc.n_samples);
  s.mc.m_max = integer(j, "bounds", "m_max", s.mc.m_max);
  s.mc.seed = static_cast<uint64_t>(num(j, "bounds", "seed", 0.0));
  s.prior_pos_std = num(j, "bounds", "prior_pos_std", s.prior_pos_std);
  s.prior_vel_std = num(j, "bounds", "prior_vel_std", s.prior_vel_std);
  if (j.contains("variants")) {
    if (!j["variants"].is_array()) throw ConfigError("config: bounds.variants must be an array");
    s.variants.clear();
    for (const auto& v : j["variants"]) {
      const std::string name = v.get<std::string>();
      if (name == "ipcrlb") s.variants.push_back(bounds::BoundVariant::kIpcrlb);
      else if (name == "efim") s.variants.push_back(bounds::BoundVariant::kEfim);
      else if (name == "pcrlb") s.variants.push_back(bounds::BoundVariant::kPcrlb);
      else throw ConfigError("config: bounds.variants: unknown variant \"" + name + "\"");
    }
  }
}

void parse_control(const json& j, Scenario& s) {
  check_keys(j, "control",
             {"v_min", "v_max", "w_max_deg", "a_v_max", "a_w_max_deg", "n_v", "n_w",
              "policies", "n_samples", "m_max", "initial_heading_deg",
              "position_only_cost"});
  s.limits.v_min = num(j, "control", "v_min", s.limits.v_min);
  s.limits.v_max = num(j, "control", "v_max", s.limits.v_max);
  if (j.contains("w_max_deg")) {
    s.limits.w_max = num(j, "control", "w_max_deg", 0.0) * kPi / 180.0;
  }
  s.limits.a_v_max = num(j, "control", "a_v_max", s.limits.a_v_max);
  s.limits.a_w_max =
      num(j, "control", "a_w_max_deg", s.limits.a_w_max * 180.0 / kPi) * kPi / 180.0;
  s.limits.n_v = integer(j, "control", "n_v", s.limits.n_v);
  s.limits.n_w = integer(j, "control", "n_w", s.limits.n_w);
  s.control_mc.n_samples = integer(j, "control", "n_samples", s.control_mc.n_samples);
  s.control_mc.m_max = integer(j, "control", "m_max", s.control_mc.m_max);
  s.control_initial_heading =
      num(j, "control", "initial_heading_deg", 0.0) * kPi / 180.0;
  s.position_only_cost = boolean(j, "control", "position_only_cost", s.position_only_cost);
  if (j.contains("policies")) {
    if (!j["policies"].is_array()) throw ConfigError("config: control.policies must be an array");
    s.policies.clear();
    for (const auto& p : j["policies"]) {
      s.policies.push_back(control::policy_from_string(p.get<std::string>()));
    }
  }
}

void parse_sweep(const json& j, Scenario& s) {
  check_keys(j, "sim.sweep", {"variable", "from", "to", "step", "r_r", "theta_deg",
                              "target_speed", "motion"});
  SweepSpec& sw = s.sweep;
  std::string var = "theta";
  if (j.contains("variable")) var = j["variable"].get<std::string>();
  double from = 0.0, to = 360.0, step = 2.0;  // theta defaults in degrees
  if (var == "theta") sw.variable = SweepVariable::kTheta;
  else if (var == "r_r") { sw.variable = SweepVariable::kRangeRx; from = 1000; to = 10000; step = 250; }
  else if (var == "p_fa") { sw.variable = SweepVariable::kPfa; from = 1e-4; to = 1e-2; step = 2.5e-4; }
  else if (var == "vartheta0") { sw.variable = SweepVariable::kVartheta0; from = 3000; to = 9000; step = 250; }
  else throw ConfigError("config: sim.sweep.variable: unknown variable \"" + var + "\"");
  from = num(j, "sim.sweep", "from", from);
  to = num(j, "sim.sweep", "to", to);
  step = num(j, "sim.sweep", "step", step);
  if (sw.variable == SweepVariable::kTheta) {
    sw.grid = SweepSpec::make_grid(from * kPi / 180.0, to * kPi / 180.0, step * kPi / 180.0);
  } else {
    sw.grid = SweepSpec::make_grid(from, to, step);
  }
  sw.fixed_r_r = num(j, "sim.sweep", "r_r", sw.fixed_r_r);
  sw.fixed_theta = num(j, "sim.sweep", "theta_deg", sw.fixed_theta * 180.0 / kPi) * kPi / 180.0;
  sw.target_speed = num(j, "sim.sweep", "target_speed", sw.target_speed);
  if (j.contains("motion")) {
    const std::string m = j["motion"].get<std::string>();
    if (m == "radial") sw.radial_motion = true;
    else if (m == "tangential") sw.radial_motion = false;
    else throw ConfigError("config: sim.sweep.motion must be \"radial\" or \"tangential\"");
  } else {
    sw.radial_motion = sw.variable == SweepVariable::kRangeRx;
  }
}

void parse_sim(const json& j, Scenario& s) {
  check_keys(j, "sim", {"seed", "runs", "horizon", "sweep"});
  s.seed = static_cast<uint64_t>(num(j, "sim", "seed", static_cast<double>(s.seed)));
  s.runs = integer(j, "sim", "runs", s.runs);
  s.horizon = integer(j, "sim", "horizon", s.horizon);
  if (j.contains("sweep")) parse_sweep(j["sweep"], s);
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "", {"signal", "clutter", "target", "transmitter", "receiver",
                     "motion", "bounds", "control", "sim"});
  Scenario s;
  try {
    if (j.contains("signal")) parse_signal(j["signal"], s);
    if (j.contains("clutter")) parse_clutter(j["clutter"], s);
    s.target = state(j, "target", s.target);
    s.tx = state(j, "transmitter", s.tx);
    s.rx = state(j, "receiver", s.rx);
    if (j.contains("motion")) {
      check_keys(j["motion"], "motion", {"T", "q"});
      const double T = num(j["motion"], "motion", "T", 1.0);
      const double q = num(j["motion"], "motion", "q", 0.1);
      s.motion = MotionModel::ncv(T, q);
    }
    if (j.contains("bounds")) parse_bounds(j["bounds"], s);
    if (j.contains("control")) parse_control(j["control"], s);
    if (j.contains("sim")) parse_sim(j["sim"], s);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace bistatic::config
