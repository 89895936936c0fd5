// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "denslab/core/parallel.hpp"
#include "denslab/io/serialize.hpp"
#include "denslab/scenario/scenario.hpp"
#include "scenarios.hpp"

namespace denslab {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

using Body = ScenarioReport (*)(const ScenarioConfig&, Checkpointer&);

struct Entry {
  ScenarioInfo info;
  Body body;
  std::vector<std::string> monitors;  // accepted monitor names
  ScenarioConfig defaults;
};

std::vector<std::string> numbered(const char* prefix, int lo, int hi) {
  std::vector<std::string> v;
  for (int k = lo; k <= hi; ++k) v.push_back(prefix + std::to_string(k));
  return v;
}

ScenarioConfig base(const std::string& name, int grid, int particles, double t_final, double dt,
                    std::vector<std::string> monitors = {}) {
  ScenarioConfig c;
  c.scenario = name;
  c.grid = grid;
  c.particles = particles;
  c.t_final = t_final;
  c.dt = dt;
  c.monitors = std::move(monitors);
  return c;
}

std::vector<Entry> build_registry() {
  constexpr double two_pi = 2 * std::numbers::pi;
  std::vector<std::string> sg_monitors{"H", "K"};
  for (const std::string& c : numbered("C", 2, 8)) sg_monitors.push_back(c);
  std::vector<std::string> euler_monitors{"E"};
  for (const std::string& i : numbered("I", 1, 8)) euler_monitors.push_back(i);

  std::vector<Entry> r;
  r.push_back({{"bracket-identities", "density bracket vs pointwise oracle, analytic and grid Jacobi defects", true},
               scenarios::bracket_identities, {}, base("bracket-identities", 128, 500, 1.0, 1.0)});
  r.push_back({{"casimir-conservation", "Casimir drift under semi-Lagrangian Hamiltonian transport", false},
               scenarios::casimir_conservation, numbered("C", 2, 8),
               base("casimir-conservation", 256, 1, 1.0, 1e-2, {"C2", "C3"})});
  r.push_back({{"leaf-casimir", "leaf Casimirs under leafwise Hamiltonian particle transport", true},
               scenarios::leaf_casimir, {}, base("leaf-casimir", 8, 2000, 1.0, 1e-2)});
  ScenarioConfig ot = base("ot-oracle", 8, 10, 1.0, 1.0);
  ot.ot.eps_final = 1e-4;
  ot.ot.max_iter = 200000;
  ot.ot.tol = 1e-6;
  r.push_back({{"ot-oracle", "debiased Sinkhorn against the exact solver on small clouds", true},
               scenarios::ot_oracle, {}, ot});
  ScenarioConfig blob = base("sg-rotating-blob", 8, 1000, two_pi, two_pi / 32, {"H", "K", "C2", "C3"});
  blob.ot.relaxation = 1.9;
  r.push_back({{"sg-rotating-blob", "semi-geostrophic translated blob against the rotating closed form", false},
               scenarios::sg_rotating_blob, sg_monitors, blob});
  ScenarioConfig still = base("sg-stationary", 8, 200, 1.0, 0.1, {"H", "K"});
  still.ot.relaxation = 1.9;
  r.push_back({{"sg-stationary", "semi-geostrophic flow started at the reference stays put", false},
               scenarios::sg_stationary, sg_monitors, still});
  r.push_back({{"euler-taylor-green", "Taylor-Green vortex stationarity", false},
               scenarios::euler_taylor_green, euler_monitors,
               base("euler-taylor-green", 128, 1, 1.0, 1e-3, {"E", "I2"})});
  r.push_back({{"euler-enstrophy", "energy and enstrophy moments of a random smooth vorticity", true},
               scenarios::euler_enstrophy, euler_monitors,
               base("euler-enstrophy", 128, 1, 1.0, 1e-3, {"E", "I2", "I3", "I4", "I5"})});
  r.push_back({{"reduction-lemma", "Hamiltonian fields on the group equal X_f composed with phi", true},
               scenarios::reduction_lemma, {}, base("reduction-lemma", 8, 200, 1.0, 1.0)});
  r.push_back({{"reduction-theorem", "the group bracket descends to the density bracket", true},
               scenarios::reduction_theorem, {}, base("reduction-theorem", 8, 200, 1.0, 1.0)});
  r.push_back({{"conjecture-probe", "group form against the shifted Lie-Poisson value (reports only)", true},
               scenarios::conjecture_probe, {}, base("conjecture-probe", 8, 50, 1.0, 1.0)});
  return r;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = build_registry();
  return r;
}

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : registry())
    if (e.info.name == name) return e;
  throw ConfigError("scenario", "unknown scenario '" + name + "'; registered: " + scenario_names_joined());
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void ScenarioReport::at_most(const std::string& name, double measured, double bound) {
  checks.push_back({name, measured, "<=", bound, 0.0, measured <= bound});
}

void ScenarioReport::at_least(const std::string& name, double measured, double bound) {
  checks.push_back({name, measured, ">=", bound, 0.0, measured >= bound});
}

void ScenarioReport::above(const std::string& name, double measured, double bound) {
  checks.push_back({name, measured, ">", bound, 0.0, measured > bound});
}

void ScenarioReport::within(const std::string& name, double measured, double lo, double hi) {
  checks.push_back({name, measured, "in", lo, hi, measured >= lo && measured <= hi});
}

void ScenarioReport::note(const std::string& key, double value) { info.emplace_back(key, fmt(value)); }
void ScenarioReport::note(const std::string& key, const std::string& value) { info.emplace_back(key, value); }

bool ScenarioReport::passed() const {
  for (const ScenarioCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

void ScenarioReport::write_text(std::ostream& out) const {
  out << "scenario: " << scenario << "\n";
  out << "checks:\n";
  for (const ScenarioCheck& c : checks) {
    out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": measured " << fmt(c.measured);
    if (c.relation == "in") out << " in [" << fmt(c.bound) << ", " << fmt(c.upper) << "]";
    else out << " " << c.relation << " " << fmt(c.bound);
    out << "\n";
  }
  if (!info.empty()) {
    out << "info:\n";
    for (const auto& [k, v] : info) out << "  " << k << ": " << v << "\n";
  }
  if (!warnings.empty()) {
    out << "warnings:\n";
    for (const std::string& w : warnings) out << "  " << w << "\n";
  }
  out << "result: " << (passed() ? "PASS" : "FAIL") << "\n";
}

Checkpointer::Checkpointer(std::filesystem::path dir, double every)
    : dir_(std::move(dir)), every_(every), next_(0.0) {}

void Checkpointer::offer(double time, int step, const std::function<nlohmann::json()>& record) {
  if (!(every_ > 0.0) || time < next_ - 1e-12 * std::max(1.0, std::abs(next_))) return;
  std::filesystem::create_directories(dir_);
  char name[48];
  std::snprintf(name, sizeof name, "step_%06d.json", step);
  nlohmann::json j = record();
  io::write_json(dir_ / name, j);
  ++written_;
  while (next_ <= time + 1e-12 * std::max(1.0, std::abs(time))) next_ += every_;
}

const std::vector<ScenarioInfo>& scenario_list() {
  static const std::vector<ScenarioInfo> list = [] {
    std::vector<ScenarioInfo> v;
    for (const Entry& e : registry()) v.push_back(e.info);
    return v;
  }();
  return list;
}

std::string scenario_names_joined() {
  std::string s;
  for (const Entry& e : registry()) s += (s.empty() ? "" : ", ") + e.info.name;
  return s;
}

ScenarioConfig scenario_defaults(const std::string& name) { return find_entry(name).defaults; }

void validate(const ScenarioConfig& cfg) {
  const Entry& e = find_entry(cfg.scenario);
  if (cfg.grid <= 0) throw ConfigError("grid", "must be positive");
  if (cfg.particles <= 0) throw ConfigError("particles", "must be positive");
  if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final)) throw ConfigError("t_final", "must be positive");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt", "must be positive");
  if (!(cfg.ot.eps_final > 0.0)) throw ConfigError("ot.eps_final", "must be positive");
  if (cfg.ot.levels <= 0) throw ConfigError("ot.levels", "must be positive");
  if (cfg.ot.max_iter <= 0) throw ConfigError("ot.max_iter", "must be positive");
  if (!(cfg.ot.tol > 0.0)) throw ConfigError("ot.tol", "must be positive");
  if (!(cfg.ot.relaxation >= 1.0 && cfg.ot.relaxation < 2.0)) throw ConfigError("ot.relaxation", "must lie in [1, 2)");
  if (cfg.threads <= 0) throw ConfigError("threads", "must be positive");
  if (!(cfg.checkpoint_every >= 0.0)) throw ConfigError("checkpoint_every", "must be positive, or 0 to disable");
  if (cfg.out.empty()) throw ConfigError("out", "must not be empty");
  if (e.info.randomized && !cfg.seed) throw ConfigError("seed", "required for the randomized scenario " + cfg.scenario);
  for (const std::string& m : cfg.monitors)
    if (std::find(e.monitors.begin(), e.monitors.end(), m) == e.monitors.end()) {
      std::string allowed;
      for (const std::string& a : e.monitors) allowed += (allowed.empty() ? "" : ", ") + a;
      throw ConfigError("monitors", "'" + m + "' is not available for " + cfg.scenario +
                                        (allowed.empty() ? " (no monitors)" : " (available: " + allowed + ")"));
    }

  const std::string& s = cfg.scenario;
  const bool sg = s == "sg-rotating-blob" || s == "sg-stationary";
  if ((sg || s == "ot-oracle") && cfg.ot.method == OtMethod::exact &&
      cfg.particles > static_cast<int>(kMaxExactPoints))
    throw ConfigError("particles", "exact transport is limited to " + std::to_string(kMaxExactPoints) + " particles");
  if (s == "ot-oracle" && cfg.particles > static_cast<int>(kMaxExactPoints))
    throw ConfigError("particles", "the exact oracle is limited to " + std::to_string(kMaxExactPoints) + " particles");
  if ((s == "euler-taylor-green" || s == "euler-enstrophy") && (!power_of_two(cfg.grid) || cfg.grid < Grid2D::kMinCells))
    throw ConfigError("grid", "must be a power of two, at least " + std::to_string(Grid2D::kMinCells));
  if (s == "casimir-conservation" && cfg.grid < 2 * Grid2D::kMinCells)
    throw ConfigError("grid", "must be at least " + std::to_string(2 * Grid2D::kMinCells) + " for the refinement check");
  if (s == "bracket-identities" && cfg.grid < Grid2D::kMinCells)
    throw ConfigError("grid", "must be at least " + std::to_string(Grid2D::kMinCells));
  if ((s == "reduction-lemma" || s == "reduction-theorem" || s == "conjecture-probe") &&
      (cfg.particles < 2 || cfg.particles > 200))
    throw ConfigError("particles", "must lie in [2, 200] for the dense group solve");
  if (s == "casimir-conservation" && cfg.monitors.empty())
    throw ConfigError("monitors", "at least one Casimir monitor is required");
}

ScenarioReport execute_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const Entry& e = find_entry(cfg.scenario);
  const int previous = num_threads();
  set_num_threads(cfg.threads);
  Checkpointer cp(cfg.out / "checkpoints", cfg.checkpoint_every);
  ScenarioReport rep;
  try {
    rep = e.body(cfg, cp);
  } catch (...) {
    set_num_threads(previous);
    throw;
  }
  set_num_threads(previous);
  rep.scenario = cfg.scenario;
  if (cp.written() > 0) rep.note("checkpoints written", static_cast<double>(cp.written()));
  return rep;
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.out);
  ScenarioOutcome out{execute_scenario(cfg), 0};
  out.report.series.write_csv(cfg.out / "invariants.csv");
  std::ofstream txt(cfg.out / "report.txt");
  txt << "config: " << cfg.to_json().dump() << "\n";
  out.report.write_text(txt);
  if (!txt) throw std::runtime_error("cannot write " + (cfg.out / "report.txt").string());
  out.exit_status = out.report.passed() ? 0 : 1;
  return out;
}

}  // namespace denslab
