// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion. Oracles live here or in
// the shared test support; library results are only ever the measured side.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "denslab/bracket/bracket.hpp"
#include "denslab/density/functionals.hpp"
#include "denslab/density/pushforward.hpp"
#include "denslab/dynamics/euler.hpp"
#include "denslab/reduction/reduction.hpp"
#include "denslab/scenario/scenario.hpp"
#include "denslab/transport/transport.hpp"
#include "pv_check.hpp"
#include "support.hpp"

using namespace denslab;
using namespace denslab::test;
namespace fs = std::filesystem;

namespace {

struct Measure {
  std::string what;
  double value;
  std::string relation;  // "<=", "<", ">", "in"
  double bound;
  double upper = 0.0;
  bool ok() const {
    if (relation == "<=") return value <= bound;
    if (relation == "<") return value < bound;
    if (relation == ">") return value > bound;
    return value >= bound && value <= upper;
  }
};

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<Measure>()> run;
};

ParticleDensity weighted_cloud(Rng& rng, std::size_t n) {
  std::vector<Vec2> p = random_points(rng, n, -1, 1);
  std::vector<double> w(n);
  for (double& x : w) x = uniform(rng, 0.5, 1.5);
  return normalize(ParticleDensity(std::move(p), std::move(w)));
}

double rel_drift(const std::vector<double>& v) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()) / std::abs(v.front()));
  return d;
}

std::vector<double> series_of(const InvariantSeries& s, const std::string& name) {
  std::vector<double> v;
  for (const auto& r : s.records())
    if (r.name == name) v.push_back(r.value);
  return v;
}

// Closed form of the blob centre: counterclockwise rotation at unit rate.
Vec2 rotated(const Vec2& a, double t) {
  return {std::cos(t) * a.x1 - std::sin(t) * a.x2, std::sin(t) * a.x1 + std::cos(t) * a.x2};
}

// 1. Density bracket against the complex-step oracle.
std::vector<Measure> bracket_identity() {
  Rng rng(20240901);
  const ParticleDensity nu = weighted_cloud(rng, 400);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Poly2 f = random_poly(rng, 1 + k % 4), g = random_poly(rng, 1 + (k + 2) % 4);
    const TermList tf = TermList::from(f), tg = TermList::from(g);
    long double oracle = 0.0L;
    for (std::size_t i = 0; i < nu.size(); ++i) oracle += nu.weights[i] * bracket_oracle(tf, tg, nu.positions[i]);
    worst = std::max(worst, std::abs(dens_bracket(f, g, nu) - static_cast<double>(oracle)));
  }
  return {{"max |error| over 20 pairs", worst, "<=", 1e-12}};
}

// Fields that are not trigonometric polynomials on the unit torus.
struct PeriodicTriple {
  ScalarField2D f, g, h;
  GridDensity nu;
};

PeriodicTriple periodic_triple(int n) {
  const Grid2D t = Grid2D::torus(n, n, 1.0, 1.0);
  const double w = 2 * kPi;
  return {ScalarField2D::sample(t, [&](const Vec2& p) { return std::exp(0.7 * std::sin(w * p.x1)) * std::cos(w * p.x2); }),
          ScalarField2D::sample(t, [&](const Vec2& p) { return std::exp(0.5 * std::cos(w * (p.x1 + 2 * p.x2))); }),
          ScalarField2D::sample(t, [&](const Vec2& p) { return std::sin(w * p.x2 + 0.4 * std::cos(w * p.x1)); }),
          normalize(GridDensity::from_function(t, [&](const Vec2& p) {
            return std::exp(std::sin(w * p.x1) * std::cos(w * p.x2));
          }))};
}

// 2. Jacobi on polynomial triples, and the grid defect ratio.
std::vector<Measure> jacobi() {
  Rng rng(77);
  const ParticleDensity nu = weighted_cloud(rng, 300);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Poly2 f = random_poly(rng, 1 + k % 3), g = random_poly(rng, 3), h = random_poly(rng, 2 + k % 2);
    worst = std::max(worst, std::abs(jacobi_defect(f, g, h, nu)));
  }
  const PeriodicTriple a = periodic_triple(128), b = periodic_triple(256);
  const double da = std::abs(jacobi_defect(a.f, a.g, a.h, a.nu)), db = std::abs(jacobi_defect(b.f, b.g, b.h, b.nu));
  return {{"analytic defect, max over 20 triples", worst, "<=", 1e-10},
          {"grid defect ratio 128 -> 256", da / db, "in", 3.0, 5.0}};
}

double casimir_drift(int grid, double dt) {
  ScenarioConfig c = scenario_defaults("casimir-conservation");
  c.grid = grid;
  c.dt = dt;
  const ScenarioReport r = execute_scenario(c);
  return std::max(rel_drift(series_of(r.series, "C2")), rel_drift(series_of(r.series, "C3")));
}

// 3. Casimir drift under semi-Lagrangian Hamiltonian transport; refinement
// in the grid alone and in grid and step together.
std::vector<Measure> casimir() {
  ScenarioConfig c = scenario_defaults("casimir-conservation");
  const ScenarioReport r = execute_scenario(c);
  const double c2 = rel_drift(series_of(r.series, "C2")), c3 = rel_drift(series_of(r.series, "C3"));
  const double fine = std::max(c2, c3);
  const double grid_coarse = casimir_drift(128, 1e-2), joint_coarse = casimir_drift(128, 2e-2);
  return {{"C2 drift (256^2, dt 1e-2, T 1)", c2, "<=", 1e-3},
          {"C3 drift", c3, "<=", 1e-3},
          {"drift ratio 128^2 / 256^2 at dt 1e-2", grid_coarse / fine, ">", 1.0},
          {"drift ratio (128^2, dt 2e-2) / (256^2, dt 1e-2)", joint_coarse / fine, ">", 1.0}};
}

// 4. Leaf Casimirs under leafwise Hamiltonian transport.
std::vector<Measure> leaf_casimir() {
  Rng rng(4);
  ParticleDensity3 nu;
  for (int i = 0; i < 3000; ++i) {
    nu.positions.push_back({uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)});
    nu.weights.push_back(1.0 / 3000);
  }
  // f = (1 + x3) sin(pi x1) sin(pi x2) + x3^2 sin(pi x1) sin(2 pi x2) / 2
  // vanishes on the box edges, so the field is tangent to them.
  const LeafVelocityFunction v = [](const Vec3& p) {
    const double s1 = std::sin(kPi * p.x1), c1 = std::cos(kPi * p.x1);
    const double s2 = std::sin(kPi * p.x2), c2 = std::cos(kPi * p.x2);
    const double f1 = (1 + p.x3) * kPi * c1 * s2 + 0.5 * p.x3 * p.x3 * kPi * c1 * std::sin(2 * kPi * p.x2);
    const double f2 = (1 + p.x3) * kPi * s1 * c2 + p.x3 * p.x3 * kPi * s1 * std::cos(2 * kPi * p.x2);
    return Vec2{f2, -f1};
  };
  const ParticleDensity3 moved = pushforward_leafwise(v, nu, 1.0, 1e-2);
  double worst = 0.0, oracle_gap = 0.0, moved_by = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const MomentFunction h = MomentFunction::power(k);
    const double before = casimir_leaf(h, nu), after = casimir_leaf(h, moved);
    worst = std::max(worst, std::abs(after - before));
    long double direct = 0.0L;
    for (std::size_t i = 0; i < nu.weights.size(); ++i) direct += nu.weights[i] * std::pow(nu.positions[i].x3, k);
    oracle_gap = std::max(oracle_gap, std::abs(before - static_cast<double>(direct)));
  }
  double outside = 0.0;
  for (std::size_t i = 0; i < nu.positions.size(); ++i) {
    const Vec3& q = moved.positions[i];
    moved_by = std::max(moved_by, std::hypot(q.x1 - nu.positions[i].x1, q.x2 - nu.positions[i].x2));
    outside = std::max({outside, -q.x1, q.x1 - 1.0, -q.x2, q.x2 - 1.0});
  }
  return {{"max |C(after) - C(before)| over h = x^1..x^4", worst, "<=", 1e-12},
          {"largest excursion outside the box", outside, "<=", 1e-6},
          {"casimir_leaf vs direct sum", oracle_gap, "<=", 1e-12},
          {"largest in-leaf displacement (flow is not trivial)", moved_by, ">", 1e-2}};
}

// 5. Debiased Sinkhorn against the exact solver, and exact duals.
std::vector<Measure> ot_oracle() {
  Rng rng(505);
  double worst_rel = 0.0, worst_dual = 0.0, worst_brute = 0.0;
  for (int k = 0; k < 20; ++k) {
    const ParticleDensity a = ParticleDensity::equal_weights(random_points(rng, 10));
    const ParticleDensity b = ParticleDensity::equal_weights(random_points(rng, 10));
    const TransportResult ex = w2_exact_small(a, b);
    // Brute force over all 10! assignments.
    std::vector<int> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double c = 0.0;
      for (int i = 0; i < 10; ++i) c += norm2(a.positions[i] - b.positions[perm[i]]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst_brute = std::max(worst_brute, std::abs(ex.cost - best / 10));
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) {
        const double slack = norm2(a.positions[i] - b.positions[j]) - ex.source_potential[i] - ex.target_potential[j];
        worst_dual = std::max(worst_dual, -slack);
      }
    SinkhornConfig cfg = SinkhornConfig::geometric(1e-4 * diameter_squared(a, b));
    cfg.tolerance = 1e-6;
    cfg.max_iterations = 200000;
    SinkhornSolver s(cfg);
    const TransportResult sk = s.solve(a, b);
    worst_rel = std::max(worst_rel, std::abs(sk.reported_cost() - ex.cost) / ex.cost);
  }
  return {{"max relative |debiased - exact| over 20 instances", worst_rel, "<=", 1e-3},
          {"exact dual feasibility residual", worst_dual, "<=", 1e-9},
          {"exact cost vs brute force (oracle check)", worst_brute, "<=", 1e-12}};
}

struct BlobRun {
  double k_drift, h_drift, closure;
};

BlobRun blob(OtMethod method, int particles) {
  ScenarioConfig c = scenario_defaults("sg-rotating-blob");
  c.ot.method = method;
  c.particles = particles;
  const ScenarioReport r = execute_scenario(c);
  const Vec2 a{0.2, 0.0};
  const std::vector<double> x = series_of(r.series, "center_x1"), y = series_of(r.series, "center_x2");
  const Vec2 end{x.back(), y.back()};
  return {rel_drift(series_of(r.series, "K")), rel_drift(series_of(r.series, "H")),
          norm(end - rotated(a, c.t_final)) / norm(a)};
}

const BlobRun& blob_sinkhorn() {
  static const BlobRun r = blob(OtMethod::sinkhorn, 1000);
  return r;
}

const BlobRun& blob_exact() {
  static const BlobRun r = blob(OtMethod::exact, 64);
  return r;
}

// 6. Angular momentum and closure on the rotating blob.
std::vector<Measure> sg_noether() {
  const BlobRun& s = blob_sinkhorn();
  const BlobRun& e = blob_exact();
  return {{"K drift, sinkhorn N=1000", s.k_drift, "<=", 1e-2},
          {"K drift, exact N=64", e.k_drift, "<=", 1e-3},
          {"closure / |a|, sinkhorn", s.closure, "<=", 1e-2},
          {"closure / |a|, exact", e.closure, "<=", 1e-2}};
}

// 7. Energy on the same runs.
std::vector<Measure> sg_energy() {
  return {{"H drift, sinkhorn debiased N=1000", blob_sinkhorn().h_drift, "<=", 1e-2},
          {"H drift, exact N=64", blob_exact().h_drift, "<=", 1e-3}};
}

// 8. Euler invariants and Taylor-Green stationarity.
std::vector<Measure> euler() {
  const Grid2D g = Grid2D::torus(128, 128, 2 * kPi, 2 * kPi);
  Rng rng(808);
  std::vector<std::array<double, 4>> modes;  // a, b, phase, amplitude
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      if (a * a + b * b > 0 && a * a + b * b <= 16)
        modes.push_back({double(a), double(b), uniform(rng, 0, 2 * kPi), 1.0 / (a * a + b * b)});
  const ScalarField2D w = ScalarField2D::sample(g, [&](const Vec2& p) {
    double s = 0.0;
    for (const auto& m : modes) s += m[3] * std::cos(m[0] * p.x1 + m[1] * p.x2 + m[2]);
    return s;
  });
  const EulerRunResult r = euler_run({w, 0.0}, 1.0, 1e-3, {2, 3, 4, 5});
  std::vector<Measure> out;
  for (const char* n : {"E", "I2", "I3", "I4", "I5"})
    out.push_back({std::string(n) + " drift (128^2, dt 1e-3, T 1)", rel_drift(series_of(r.series, n)), "<=", 1e-6});

  const ScalarField2D tg = ScalarField2D::sample(g, [](const Vec2& p) { return std::sin(p.x1) * std::sin(p.x2); });
  const EulerRunResult t = euler_run({tg, 0.0}, 1.0, 1e-3, {});
  double d = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec2 p = g.center(static_cast<int>(k % g.nx()), static_cast<int>(k / g.nx()));
    d = std::max(d, std::abs(t.final_state.vorticity.values[k] - std::sin(p.x1) * std::sin(p.x2)));
  }
  out.push_back({"Taylor-Green L-infinity drift", d, "<=", 1e-6});
  return out;
}

// 9. Potential vorticity against particle binning.
std::vector<Measure> potential_vorticity() {
  double worst = 0.0, hess = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const PvCheck c = pv_binning_check(BumpField::seeded(rng));
    worst = std::max(worst, c.l1_relative);
    hess = std::max(hess, c.max_hessian);
  }
  return {{"relative L1, max over 5 seeds", worst, "<=", 5e-2}, {"max |Hess f| (precondition)", hess, "<", 0.5}};
}

// 10. Lemma and Theorem with generic-solve Hamiltonian fields.
std::vector<Measure> reduction() {
  Rng rng(1010);
  double lemma = 0.0, theorem = 0.0;
  for (std::size_t n : {2, 9, 50, 120, 200}) {
    const ParticleDensity mu = weighted_cloud(rng, n);
    const double c1 = uniform(rng, -0.2, 0.2), c2 = uniform(rng, -0.2, 0.2);
    const DiscreteDiffeo phi = DiscreteDiffeo::from(mu, [=](const Vec2& x) {
      return Vec2{x.x1 + c1 * std::sin(x.x2) + 0.1 * x.x2 * x.x2, x.x2 + c2 * std::cos(x.x1)};
    });
    for (int d = 0; d <= 4; ++d) {
      const Poly2 f = random_poly(rng, d), g = random_poly(rng, 4 - d / 2);
      const TermList tf = TermList::from(f), tg = TermList::from(g);
      const GroupTangent x = ham_field_on_group(f, phi);
      long double oracle = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 df = tf.gradient(phi.images[i]);
        lemma = std::max(lemma, norm(x[i] - Vec2{df.x2, -df.x1}));
        oracle += phi.weights[i] * bracket_oracle(tf, tg, phi.images[i]);
      }
      theorem = std::max(theorem, std::abs(group_bracket(f, g, phi) - static_cast<double>(oracle)));
    }
  }
  return {{"Lemma residual, max", lemma, "<=", 1e-10}, {"Theorem residual, max", theorem, "<=", 1e-10}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 11. Every scenario rerun at 1 and 4 threads gives the same CSV bytes.
// Expensive scenarios are shrunk; the code paths are the same.
std::vector<Measure> determinism() {
  const fs::path root = fs::temp_directory_path() / "denslab_acceptance_determinism";
  int differing = 0, compared = 0;
  for (const ScenarioInfo& info : scenario_list()) {
    ScenarioConfig c = scenario_defaults(info.name);
    c.seed = 31337;
    if (info.name == "sg-rotating-blob") {
      c.particles = 300;
      c.dt = c.t_final / 8;
    } else if (info.name == "casimir-conservation") {
      c.grid = 64;
      c.dt = 0.05;
    } else if (info.name == "euler-taylor-green" || info.name == "euler-enstrophy") {
      c.grid = 64;
      c.t_final = 0.1;
      c.dt = 1e-2;
    } else if (info.name == "bracket-identities") {
      c.grid = 64;
    }
    std::string csv[2];
    const int threads[2] = {1, 4};
    for (int r = 0; r < 2; ++r) {
      c.out = root / (info.name + "_" + std::to_string(threads[r]));
      c.threads = threads[r];
      run_scenario(c);
      csv[r] = slurp(c.out / "invariants.csv");
    }
    ++compared;
    if (csv[0].empty() || csv[0] != csv[1]) {
      ++differing;
      std::printf("    differs: %s\n", info.name.c_str());
    }
  }
  fs::remove_all(root);
  return {{"scenarios with differing CSV (of " + std::to_string(compared) + ")", double(differing), "<=", 0.0}};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "bracket identity on particle densities", bracket_identity},
      {2, "Jacobi identity", jacobi},
      {3, "Casimir conservation under Hamiltonian transport", casimir},
      {4, "leaf Casimirs", leaf_casimir},
      {5, "OT oracle equivalence", ot_oracle},
      {6, "SG angular momentum and closure", sg_noether},
      {7, "SG energy", sg_energy},
      {8, "Euler energy and enstrophy moments", euler},
      {9, "potential vorticity", potential_vorticity},
      {10, "reduction Lemma and Theorem", reduction},
      {11, "determinism across thread counts", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Measure> ms;
    std::string error;
    try {
      ms = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty() && !ms.empty();
    for (const Measure& m : ms) ok = ok && m.ok();
    if (!ok) ++failed;
    std::printf("%s  %2d  %s  (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
    for (const Measure& m : ms) {
      if (m.relation == "in")
        std::printf("        %s: %.3e in [%g, %g]\n", m.what.c_str(), m.value, m.bound, m.upper);
      else
        std::printf("        %s: %.3e %s %g\n", m.what.c_str(), m.value, m.relation.c_str(), m.bound);
    }
    if (!error.empty()) std::printf("        error: %s\n", error.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
