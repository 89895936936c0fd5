// SPDX-License-Identifier: Apache-2.0
#include "denslab/scenario/config.hpp"

#include <limits>

namespace denslab {
namespace {

using Json = nlohmann::json;

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

int integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(field, "out of range");
  return static_cast<int>(x);
}

std::string text(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

template <class Parse>
auto parse_enum(const Json& v, const std::string& field, Parse parse) {
  try {
    return parse(text(v, field));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

void apply_ot(OtSettings& ot, const Json& j) {
  if (!j.is_object()) throw ConfigError("ot", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string field = "ot." + key;
    if (key == "method") ot.method = parse_enum(v, field, parse_ot_method);
    else if (key == "eps_final") ot.eps_final = number(v, field);
    else if (key == "levels") ot.levels = integer(v, field);
    else if (key == "max_iter") ot.max_iter = integer(v, field);
    else if (key == "tol") ot.tol = number(v, field);
    else if (key == "relaxation") ot.relaxation = number(v, field);
    else if (key == "velocity") ot.velocity = parse_enum(v, field, parse_sg_velocity_form);
    else throw ConfigError(field, "unknown key");
  }
}

}  // namespace

SinkhornConfig OtSettings::sinkhorn_for(const ParticleDensity& a, const ParticleDensity& b) const {
  SinkhornConfig cfg = SinkhornConfig::geometric(eps_final * diameter_squared(a, b), levels);
  cfg.max_iterations = max_iter;
  cfg.tolerance = tol;
  cfg.relaxation = relaxation;
  return cfg;
}

nlohmann::json ScenarioConfig::to_json() const {
  Json j;
  j["scenario"] = scenario;
  j["grid"] = grid;
  j["particles"] = particles;
  j["t_final"] = t_final;
  j["dt"] = dt;
  j["ot"] = {{"method", to_string(ot.method)},
             {"eps_final", ot.eps_final},
             {"levels", ot.levels},
             {"max_iter", ot.max_iter},
             {"tol", ot.tol},
             {"relaxation", ot.relaxation},
             {"velocity", ot.velocity == SGVelocityForm::debiased ? "debiased" : "raw"}};
  j["monitors"] = monitors;
  if (seed) j["seed"] = *seed;
  j["out"] = out.string();
  j["threads"] = threads;
  j["checkpoint_every"] = checkpoint_every;
  return j;
}

void apply_json(ScenarioConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") cfg.scenario = text(v, key);
    else if (key == "grid") cfg.grid = integer(v, key);
    else if (key == "particles") cfg.particles = integer(v, key);
    else if (key == "t_final") cfg.t_final = number(v, key);
    else if (key == "dt") cfg.dt = number(v, key);
    else if (key == "ot") apply_ot(cfg.ot, v);
    else if (key == "monitors") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of names");
      cfg.monitors.clear();
      for (const Json& m : v) cfg.monitors.push_back(text(m, key));
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "out") cfg.out = text(v, key);
    else if (key == "threads") cfg.threads = integer(v, key);
    else if (key == "checkpoint_every") cfg.checkpoint_every = number(v, key);
    else throw ConfigError(key, "unknown key");
  }
}

std::mt19937_64 substream(std::uint64_t seed, const std::string& label) {
  // FNV-1a of the label, mixed with the seed through seed_seq.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace denslab
