#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "bistatic/config.hpp"
#include "bistatic/errors.hpp"
#include "bistatic/sim.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<uint64_t> seed;
  std::optional<int> samples;
  std::optional<int> runs;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--samples", args.samples, "Monte Carlo samples per integral");
  cmd->add_option("--runs", args.runs, "Monte Carlo run count override");
  cmd->add_option("--threads", args.threads, "worker thread cap (0 = all cores)");
}

bistatic::config::Scenario load(const CommonArgs& args) {
  if (!std::filesystem::exists(args.config_path)) {
    throw bistatic::ConfigError("config file not found: " + args.config_path);
  }
  auto scenario = bistatic::config::load_scenario(args.config_path);
  if (args.seed) scenario.seed = *args.seed;
  if (args.samples) scenario.mc.n_samples = *args.samples;
  if (args.runs) scenario.runs = *args.runs;
  return scenario;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

void stage(const std::string& what) { std::cerr << "[bistatic] " << what << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bistatic radar tracking bounds and receiver trajectory control"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* tmu = app.add_subcommand("tmu-sweep",
                                 "measurement uncertainty over a geometry sweep");
  auto* bounds_cmd = app.add_subcommand("bounds-compare",
                                        "bound traces over a geometry sweep");
  auto* track = app.add_subcommand("track",
                                   "clutter tracking runs with the Ipcrlb reference");
  auto* control = app.add_subcommand("control-compare",
                                     "closed-loop receiver control comparison");
  auto* validate = app.add_subcommand("validate-assumption1",
                                      "Doppler/range-coupling validation tables");
  for (auto* cmd : {tmu, bounds_cmd, track, control, validate}) {
    add_common(cmd, args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto scenario = load(args);
    if (tmu->parsed()) {
      stage("tmu sweep");
      const auto rows = bistatic::sim::run_tmu_sweep(scenario);
      bistatic::csv::emit_csv(bistatic::sim::tmu_sweep_table(scenario, rows),
                              out_path(args, "tmu_sweep.csv"));
    } else if (bounds_cmd->parsed()) {
      stage("bound comparison");
      const auto rows = bistatic::sim::run_bound_comparison(scenario, args.threads);
      bistatic::csv::emit_csv(bistatic::sim::bound_comparison_table(scenario, rows),
                              out_path(args, "bounds.csv"));
    } else if (track->parsed()) {
      stage("tracking runs");
      const auto result = bistatic::sim::run_tracking(scenario, args.threads);
      bistatic::csv::emit_csv(bistatic::sim::tracking_table(result),
                              out_path(args, "track.csv"));
    } else if (control->parsed()) {
      stage("closed-loop control comparison");
      const auto result = bistatic::sim::run_closed_loop(scenario, args.threads);
      bistatic::csv::emit_csv(bistatic::sim::closed_loop_table(result),
                              out_path(args, "closed_loop.csv"));
    } else if (validate->parsed()) {
      stage("assumption-1 validation");
      const auto rows = bistatic::sim::run_assumption1(scenario);
      bistatic::csv::emit_csv(bistatic::sim::assumption1_table(rows),
                              out_path(args, "assumption1.csv"));
    }
  } catch (const bistatic::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
