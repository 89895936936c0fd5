// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario configuration: scenario defaults, then a JSON file, then flag
// overrides. Every numeric field must be positive once merged.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "denslab/dynamics/sg.hpp"
#include "denslab/transport/transport.hpp"

namespace denslab {

struct OtSettings {
  OtMethod method = OtMethod::sinkhorn;
  double eps_final = 1e-3;  // relative to the squared diameter
  int levels = 4;
  int max_iter = 20000;
  double tol = 1e-9;
  double relaxation = 1.0;
  SGVelocityForm velocity = SGVelocityForm::debiased;

  SinkhornConfig sinkhorn_for(const ParticleDensity& a, const ParticleDensity& b) const;
};

struct ScenarioConfig {
  std::string scenario;
  int grid = 0;          // cells per axis
  int particles = 0;
  double t_final = 0.0;
  double dt = 0.0;
  OtSettings ot;
  std::vector<std::string> monitors;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  int threads = 1;
  double checkpoint_every = 0.0;  // simulated time between checkpoints; 0 disables

  nlohmann::json to_json() const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& why)
      : std::invalid_argument(field + ": " + why), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Overlays the keys present in j onto cfg. Unknown keys and wrong types
// raise ConfigError naming the key.
void apply_json(ScenarioConfig& cfg, const nlohmann::json& j);

// Generator for one labelled substream of the run seed. Streams with
// different labels are independent; the same (seed, label) always gives
// the same stream.
std::mt19937_64 substream(std::uint64_t seed, const std::string& label);

}  // namespace denslab
