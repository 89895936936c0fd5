// SPDX-License-Identifier: Apache-2.0
// Command-line scenario runner.
//
//   denslab list
//   denslab run <scenario> [--config FILE] [flags]
//   denslab validate --config FILE
//
// Exit status: 0 when every check passed, 1 when a check failed, 2 for
// configuration errors, 3 for runtime failures.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "denslab/io/serialize.hpp"
#include "denslab/scenario/scenario.hpp"

namespace {

using denslab::ConfigError;
using denslab::ScenarioConfig;

struct Overrides {
  std::string config;
  std::string ot_method, sg_velocity, out;
  double ot_eps_final = 0, ot_tol = 0, ot_relaxation = 0, t_final = 0, dt = 0, checkpoint_every = 0;
  int ot_max_iter = 0, ot_levels = 0, threads = 0, grid = 0, particles = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> monitors;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--ot-method", o.ot_method, "exact or sinkhorn");
  cmd->add_option("--ot-eps-final", o.ot_eps_final, "final epsilon relative to the squared diameter");
  cmd->add_option("--ot-levels", o.ot_levels, "number of epsilon levels");
  cmd->add_option("--ot-max-iter", o.ot_max_iter, "Sinkhorn iterations per level");
  cmd->add_option("--ot-tol", o.ot_tol, "Sinkhorn L1 marginal tolerance");
  cmd->add_option("--ot-relaxation", o.ot_relaxation, "Sinkhorn over-relaxation in [1, 2)");
  cmd->add_option("--sg-velocity", o.sg_velocity, "debiased or raw");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--grid", o.grid, "cells per axis");
  cmd->add_option("--particles", o.particles, "particle count");
  cmd->add_option("--t-final", o.t_final, "time horizon");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--monitors", o.monitors, "comma-separated monitor names")->delimiter(',');
  cmd->add_option("--checkpoint-every", o.checkpoint_every, "simulated time between checkpoints (0 disables)");
}

bool given(const CLI::App* cmd, const char* flag) { return cmd->count(flag) > 0; }

template <class Parse>
auto parse_field(const std::string& field, const std::string& value, Parse parse) {
  try {
    return parse(value);
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

void apply_flags(ScenarioConfig& cfg, const CLI::App* cmd, const Overrides& o) {
  if (given(cmd, "--ot-method")) cfg.ot.method = parse_field("ot.method", o.ot_method, denslab::parse_ot_method);
  if (given(cmd, "--ot-eps-final")) cfg.ot.eps_final = o.ot_eps_final;
  if (given(cmd, "--ot-levels")) cfg.ot.levels = o.ot_levels;
  if (given(cmd, "--ot-max-iter")) cfg.ot.max_iter = o.ot_max_iter;
  if (given(cmd, "--ot-tol")) cfg.ot.tol = o.ot_tol;
  if (given(cmd, "--ot-relaxation")) cfg.ot.relaxation = o.ot_relaxation;
  if (given(cmd, "--sg-velocity"))
    cfg.ot.velocity = parse_field("ot.velocity", o.sg_velocity, denslab::parse_sg_velocity_form);
  if (given(cmd, "--threads")) cfg.threads = o.threads;
  if (given(cmd, "--seed")) cfg.seed = o.seed;
  if (given(cmd, "--out")) cfg.out = o.out;
  if (given(cmd, "--grid")) cfg.grid = o.grid;
  if (given(cmd, "--particles")) cfg.particles = o.particles;
  if (given(cmd, "--t-final")) cfg.t_final = o.t_final;
  if (given(cmd, "--dt")) cfg.dt = o.dt;
  if (given(cmd, "--monitors")) cfg.monitors = o.monitors;
  if (given(cmd, "--checkpoint-every")) cfg.checkpoint_every = o.checkpoint_every;
}

nlohmann::json read_config(const std::string& path) {
  try {
    return denslab::io::read_json(path);
  } catch (const std::exception& e) {
    throw ConfigError("config", e.what());
  }
}

// Defaults for the scenario, then the file, then the flags.
ScenarioConfig merge(const std::string& scenario, const CLI::App* cmd, const Overrides& o) {
  std::string name = scenario;
  nlohmann::json file;
  if (!o.config.empty()) {
    file = read_config(o.config);
    if (file.is_object() && file.contains("scenario")) {
      if (!file["scenario"].is_string()) throw ConfigError("scenario", "expected a string");
      const std::string in_file = file["scenario"].get<std::string>();
      if (name.empty()) name = in_file;
      else if (in_file != name)
        throw ConfigError("scenario", "file names '" + in_file + "' but the command line names '" + name + "'");
    }
  }
  if (name.empty()) throw ConfigError("scenario", "not given; registered: " + denslab::scenario_names_joined());
  ScenarioConfig cfg = denslab::scenario_defaults(name);
  if (!o.config.empty()) denslab::apply_json(cfg, file);
  apply_flags(cfg, cmd, o);
  denslab::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"denslab scenario runner"};
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list", "list registered scenarios");

  Overrides run_o;
  std::string scenario;
  CLI::App* run = app.add_subcommand("run", "run a scenario");
  run->add_option("scenario", scenario, "scenario name")->required();
  add_flags(run, run_o);

  Overrides val_o;
  CLI::App* val = app.add_subcommand("validate", "check a configuration file and print the merged result");
  add_flags(val, val_o);
  val->get_option("--config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const denslab::ScenarioInfo& s : denslab::scenario_list())
        std::printf("%-22s %s%s\n", s.name.c_str(), s.summary.c_str(), s.randomized ? " [needs --seed]" : "");
      return 0;
    }
    if (*val) {
      const ScenarioConfig cfg = merge("", val, val_o);
      std::printf("%s\n", cfg.to_json().dump(2).c_str());
      return 0;
    }
    const ScenarioConfig cfg = merge(scenario, run, run_o);
    const denslab::ScenarioOutcome out = denslab::run_scenario(cfg);
    out.report.write_text(std::cout);
    std::printf("outputs: %s\n", cfg.out.string().c_str());
    return out.exit_status;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
