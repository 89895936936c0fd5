// SPDX-License-Identifier: Apache-2.0
#pragma once

// Named experiments. Each scenario has its own defaults, runs with a merged
// ScenarioConfig and returns a report of checks (measured value against a
// bound) plus the monitored series. run_scenario writes invariants.csv,
// report.txt and optional checkpoints into the output directory.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "denslab/dynamics/invariants.hpp"
#include "denslab/scenario/config.hpp"

namespace denslab {

struct ScenarioCheck {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", ">", "in"
  double bound = 0.0;
  double upper = 0.0;  // second end of the interval for "in"
  bool pass = false;
};

class ScenarioReport {
 public:
  std::string scenario;
  std::vector<ScenarioCheck> checks;
  std::vector<std::pair<std::string, std::string>> info;
  std::vector<std::string> warnings;
  InvariantSeries series;

  void at_most(const std::string& name, double measured, double bound);
  void at_least(const std::string& name, double measured, double bound);
  void above(const std::string& name, double measured, double bound);
  void within(const std::string& name, double measured, double lo, double hi);
  void note(const std::string& key, double value);
  void note(const std::string& key, const std::string& value);

  // True when every check passed. A NaN measurement never passes.
  bool passed() const;
  void write_text(std::ostream& out) const;
};

// Writes checkpoints under <out>/checkpoints once per checkpoint_every of
// simulated time.
class Checkpointer {
 public:
  Checkpointer(std::filesystem::path dir, double every);
  void offer(double time, int step, const std::function<nlohmann::json()>& record);
  int written() const { return written_; }

 private:
  std::filesystem::path dir_;
  double every_;
  double next_;
  int written_ = 0;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  bool randomized = false;
};

const std::vector<ScenarioInfo>& scenario_list();
std::string scenario_names_joined();

// Defaults for a registered scenario; unknown names raise ConfigError on
// "scenario" with the registered list in the message.
ScenarioConfig scenario_defaults(const std::string& name);

// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& cfg);

// Runs the scenario in memory (sets the thread count, writes checkpoints
// when enabled).
ScenarioReport execute_scenario(const ScenarioConfig& cfg);

// Validates, runs and writes invariants.csv and report.txt into cfg.out.
// The exit status is 0 iff every check passed.
struct ScenarioOutcome {
  ScenarioReport report;
  int exit_status = 0;
};
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

}  // namespace denslab
