// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "denslab/dynamics/euler.hpp"
#include "denslab/dynamics/sg.hpp"
#include "support.hpp"

using namespace denslab;
using namespace denslab::test;

namespace {

SinkhornConfig sg_config(const ParticleDensity& a, const ParticleDensity& b) {
  SinkhornConfig cfg = SinkhornConfig::geometric(1e-3 * diameter_squared(a, b));
  cfg.relaxation = 1.9;
  return cfg;
}

SGState translated_blob(std::size_t n, Vec2 a) {
  const ParticleDensity mu = sunflower_disc(n, 0.5);
  std::vector<Vec2> y;
  for (const Vec2& p : mu.positions) y.push_back(p + a);
  return {ParticleDensity::equal_weights(std::move(y)), mu, 0.0};
}

Vec2 mean_position(const ParticleDensity& p) {
  Vec2 c{};
  for (std::size_t i = 0; i < p.size(); ++i) c += p.weights[i] * p.positions[i];
  return c;
}

// Closed form of da/dt = -J a: counterclockwise rotation at unit rate.
Vec2 rotated(const Vec2& a, double t) {
  return {std::cos(t) * a.x1 - std::sin(t) * a.x2, std::sin(t) * a.x1 + std::cos(t) * a.x2};
}

Grid2D two_pi_torus(int n) { return Grid2D::torus(n, n, 2 * kPi, 2 * kPi); }

// Random smooth vorticity with modes 0 < |k| <= 4, amplitudes ~ 1/|k|^2.
ScalarField2D smooth_vorticity(const Grid2D& g, std::uint64_t seed) {
  Rng rng(seed);
  struct Mode {
    int a, b;
    double phase, amp;
  };
  std::vector<Mode> modes;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      const int k2 = a * a + b * b;
      if (k2 == 0 || k2 > 16) continue;
      modes.push_back({a, b, uniform(rng, 0.0, 2 * kPi), 1.0 / k2});
    }
  return ScalarField2D::sample(g, [&](const Vec2& p) {
    double s = 0.0;
    for (const Mode& m : modes) s += m.amp * std::cos(m.a * p.x1 + m.b * p.x2 + m.phase);
    return s;
  });
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("sunflower disc is centred with equal weights") {
  const ParticleDensity d = sunflower_disc(500, 0.5, {0.3, -0.1});
  CHECK(d.size() == 500);
  const Vec2 c = mean_position(d);
  CHECK(std::abs(c.x1 - 0.3) <= 1e-14);
  CHECK(std::abs(c.x2 + 0.1) <= 1e-14);
  for (double w : d.weights) CHECK(w == d.weights[0]);
  for (const Vec2& p : d.positions) CHECK(norm(p - Vec2{0.3, -0.1}) <= 0.5 + 1e-2);
  CHECK_THROWS_AS(sunflower_disc(0, 1.0), std::invalid_argument);
}

TEST_CASE("invariant K") {
  CHECK(invariant_K(ParticleDensity({{0.6, 0.8}}, {1.0})) == doctest::Approx(1.0));
  CHECK(invariant_K(ParticleDensity({{0.3, 0.0}, {-0.3, 0.0}}, {0.5, 0.5})) == doctest::Approx(0.09));
  Rng rng(4);
  const std::vector<Vec2> pts = random_points(rng, 1000, -1.0, 1.0);
  std::vector<double> w(1000);
  for (double& x : w) x = uniform(rng, 0.5, 1.5);
  long double oracle = 0.0L;
  for (std::size_t i = 0; i < pts.size(); ++i)
    oracle += static_cast<long double>(w[i]) * (static_cast<long double>(pts[i].x1) * pts[i].x1 +
                                                static_cast<long double>(pts[i].x2) * pts[i].x2);
  const double k = invariant_K(ParticleDensity(pts, w));
  CHECK(std::abs(k - static_cast<double>(oracle)) <= 1e-14 * static_cast<double>(oracle));

  // Grid quadrature of |x|^2 on the unit-mass uniform square [-1, 1]^2: 2/3.
  const Grid2D g = Grid2D::box(128, 128, {-1, -1}, {1, 1});
  const GridDensity u = GridDensity::from_function(g, [](const Vec2&) { return 0.25; });
  CHECK(invariant_K(u) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("SG velocity vanishes at the reference") {
  const ParticleDensity mu = sunflower_disc(64, 0.5);
  const SGState s{mu, mu, 0.0};
  OtDriver exact = OtDriver::exact();
  for (const Vec2& v : sg_velocity(s, exact).velocity) CHECK(norm(v) == 0.0);
  CHECK(sg_hamiltonian(s, exact) == 0.0);

  const ParticleDensity big = sunflower_disc(300, 0.5);
  const SGState t{big, big, 0.0};
  OtDriver sk = OtDriver::sinkhorn(sg_config(big, big));
  const SGVelocity v = sg_velocity(t, sk);
  CHECK(v.hamiltonian == 0.0);
  for (const Vec2& x : v.velocity) CHECK(norm(x) == 0.0);
}

TEST_CASE("SG velocity on a translated reference") {
  const Vec2 a{0.2, 0.1};
  const SGState s = translated_blob(64, a);
  // The exact map sends y to y - a.
  const TransportResult oracle = w2_exact_small(s.particles, s.reference);
  for (std::size_t i = 0; i < s.particles.size(); ++i)
    CHECK(norm(oracle.map[i] - (s.particles.positions[i] - a)) <= 1e-14);

  const Vec2 expected = -rotate_j(a);
  OtDriver exact = OtDriver::exact();
  for (const Vec2& v : sg_velocity(s, exact).velocity) {
    CHECK(norm(v - expected) <= 1e-14);
    CHECK(std::abs(dot(v, a)) <= 1e-14);
    CHECK(norm(v) == doctest::Approx(norm(a)).epsilon(1e-14));
  }

  const SGState big = translated_blob(300, a);
  OtDriver sk = OtDriver::sinkhorn(sg_config(big.particles, big.reference));
  const SGVelocity v = sg_velocity(big, sk);
  for (const Vec2& x : v.velocity) CHECK(norm(x - expected) <= 1e-6);
  CHECK(v.hamiltonian == doctest::Approx(-0.5 * norm2(a)).epsilon(1e-3));

  // The raw form J(T(y) - y) sees the entropic blur at the edge of the disc.
  OtDriver raw = OtDriver::sinkhorn(sg_config(big.particles, big.reference), SGVelocityForm::raw);
  double spread = 0.0;
  for (const Vec2& x : sg_velocity(big, raw).velocity) spread = std::max(spread, norm(x - expected));
  CHECK(spread > 1e-4);
}

TEST_CASE("SG Hamiltonian of translated references") {
  OtDriver exact = OtDriver::exact();
  double prev = 1.0;
  for (double r : {0.05, 0.1, 0.2, 0.4}) {
    const double h = sg_hamiltonian(translated_blob(64, {r, -r}), exact);
    CHECK(h == doctest::Approx(-r * r).epsilon(1e-12));
    CHECK(h < prev);
    prev = h;
  }
}

TEST_CASE("SG velocity is the symplectic gradient of H") {
  // dH(delta) = sum_i w_i omega(V_i, delta_i), checked by central differences.
  Rng rng(9);
  const auto check = [&](const SGState& s, OtDriver& ot, double h, double tol) {
    const SGVelocity v = sg_velocity(s, ot);
    std::vector<Vec2> delta = random_points(rng, s.particles.size(), -1.0, 1.0);
    double pairing = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) pairing += s.particles.weights[i] * omega(v.velocity[i], delta[i]);
    const auto moved = [&](double t) {
      std::vector<Vec2> y(s.particles.positions);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += t * delta[i];
      return SGState{ParticleDensity(std::move(y), s.particles.weights), s.reference, 0.0};
    };
    const double fd = (sg_hamiltonian(moved(h), ot) - sg_hamiltonian(moved(-h), ot)) / (2 * h);
    CHECK(std::abs(fd - pairing) <= tol * std::abs(pairing));
  };
  SUBCASE("exact") {
    const ParticleDensity nu = ParticleDensity::equal_weights(random_points(rng, 40));
    const ParticleDensity mu = ParticleDensity::equal_weights(random_points(rng, 40, 0.5, 1.5));
    OtDriver ot = OtDriver::exact();
    check({nu, mu, 0.0}, ot, 1e-7, 1e-6);
  }
  SUBCASE("sinkhorn") {
    const ParticleDensity mu = sunflower_disc(200, 0.5);
    std::vector<Vec2> y;
    for (const Vec2& p : mu.positions) y.push_back({1.3 * p.x1 + 0.1, 0.8 * p.x2 + 0.05 * p.x1 * p.x1});
    const ParticleDensity nu = ParticleDensity::equal_weights(std::move(y));
    SinkhornConfig cfg = sg_config(nu, mu);
    cfg.tolerance = 1e-12;
    OtDriver ot = OtDriver::sinkhorn(cfg);
    check({nu, mu, 0.0}, ot, 1e-5, 1e-4);
  }
}

TEST_CASE("SG steps") {
  SUBCASE("zero velocity leaves the state unchanged") {
    const ParticleDensity mu = sunflower_disc(64, 0.5);
    OtDriver ot = OtDriver::exact();
    for (SGIntegrator integ : {SGIntegrator::rk4, SGIntegrator::midpoint}) {
      const SGState next = sg_step({mu, mu, 0.0}, 0.1, integ, ot);
      CHECK(next.particles.positions == mu.positions);
      CHECK(next.time == doctest::Approx(0.1));
    }
  }
  SUBCASE("a translated blob rotates by dt") {
    const Vec2 a{0.2, 0.0};
    const SGState s = translated_blob(64, a);
    constexpr double dt = 1e-2;
    OtDriver ot = OtDriver::exact();
    for (SGIntegrator integ : {SGIntegrator::rk4, SGIntegrator::midpoint}) {
      SGStepInfo info;
      const SGState next = sg_step(s, dt, integ, ot, nullptr, &info);
      CHECK(next.particles.weights == s.particles.weights);
      const Vec2 d = mean_position(next.particles);
      CHECK(std::abs(std::atan2(d.x2, d.x1) - dt) <= 1e-4);
      if (integ == SGIntegrator::midpoint) {
        CHECK(info.midpoint_contracted);
        CHECK(info.midpoint_iterations <= kMidpointIterations);
      }
    }
  }
  SUBCASE("dt must be positive") {
    const ParticleDensity mu = sunflower_disc(8, 0.5);
    OtDriver ot = OtDriver::exact();
    CHECK_THROWS_AS(sg_step({mu, mu, 0.0}, 0.0, SGIntegrator::rk4, ot), std::invalid_argument);
  }
  CHECK(parse_sg_integrator("midpoint") == SGIntegrator::midpoint);
  CHECK_THROWS_AS(parse_sg_integrator("euler"), std::invalid_argument);
  CHECK(parse_sg_velocity_form("raw") == SGVelocityForm::raw);
  SinkhornConfig plain = SinkhornConfig::geometric(1e-3);
  plain.debias = false;
  CHECK_THROWS_AS(OtDriver::sinkhorn(plain), std::invalid_argument);
}

TEST_CASE("SG run at the reference is stationary") {
  const ParticleDensity mu = sunflower_disc(64, 0.5);
  OtDriver ot = OtDriver::exact();
  const SGRunResult r = sg_run({mu, mu, 0.0}, 1.0, 0.25, {}, ot);
  CHECK_FALSE(r.aborted);
  CHECK(r.steps == 4);
  CHECK(r.final_state.particles.positions == mu.positions);
  CHECK(r.series.relative_drift("K") == 0.0);
  CHECK(r.series.relative_drift("H", 1.0) == 0.0);
}

TEST_CASE("SG rotating blob with exact transport") {
  const Vec2 a{0.2, 0.0};
  const SGState s = translated_blob(64, a);
  const double period = 2 * kPi;
  double prev_drift = 1.0;
  for (int steps : {32, 64}) {
    OtDriver ot = OtDriver::exact();
    const SGRunResult r = sg_run(s, period, period / steps, {}, ot);
    REQUIRE_FALSE(r.aborted);
    CHECK(r.steps == steps);
    CHECK(r.final_state.time == period);
    CHECK(r.final_state.particles.weights == s.particles.weights);
    for (std::size_t k = 0; k < r.centers.size(); ++k)
      CHECK(norm(r.centers[k] - rotated(a, k * period / steps)) <= 1e-2 * norm(a));
    CHECK(r.series.relative_drift("K") <= 1e-3);
    CHECK(r.series.relative_drift("H") <= 1e-3);
    // Drift falls as dt falls.
    CHECK(r.series.relative_drift("K") < prev_drift);
    prev_drift = r.series.relative_drift("K");
  }
}

TEST_CASE("SG rotating blob with Sinkhorn transport") {
  const Vec2 a{0.2, 0.0};
  const SGState s = translated_blob(200, a);
  OtDriver ot = OtDriver::sinkhorn(sg_config(s.particles, s.reference));
  SGMonitors mon;
  mon.casimir_powers = {2, 3};
  mon.casimir_grid = Grid2D::box(8, 8, {-1, -1}, {1, 1});
  const SGRunResult r = sg_run(s, 2 * kPi, 2 * kPi / 16, mon, ot);
  REQUIRE_FALSE(r.aborted);
  CHECK(norm(r.centers.back() - a) <= 1e-2 * norm(a));
  CHECK(r.series.relative_drift("K") <= 1e-2);
  CHECK(r.series.relative_drift("H") <= 1e-2);
  // Binned Casimirs against the binned reference are pipeline diagnostics.
  for (const char* c : {"C2", "C3"}) {
    const std::vector<double> v = r.series.values(c);
    CHECK(std::abs(v.back() - v.front()) <= 5e-2 * std::abs(v.front()));
  }
  CHECK(ot.work() > 0);
}

TEST_CASE("SG run stops on transport failure and keeps the partial series") {
  const SGState s = translated_blob(100, {0.2, 0.0});
  SinkhornConfig cfg = sg_config(s.particles, s.reference);
  cfg.max_iterations = 3;
  OtDriver ot = OtDriver::sinkhorn(cfg);
  const SGRunResult r = sg_run(s, 1.0, 0.1, {}, ot);
  CHECK(r.aborted);
  CHECK(r.error.find("marginal error") != std::string::npos);
  CHECK(r.steps == 0);
  CHECK_THROWS_AS(sg_run(s, 1.0, 0.1, SGMonitors{true, true, {2}, std::nullopt}, ot), std::invalid_argument);
}

TEST_CASE("invariant series") {
  InvariantSeries s;
  s.append(0.0, "E", 1.0);
  s.append(0.0, "I2", 2.0);
  s.append(0.5, "E", 1.5);
  CHECK_THROWS_AS(s.append(0.5, "E", 1.0), std::invalid_argument);
  CHECK(s.names() == std::vector<std::string>{"E", "I2"});
  CHECK(s.relative_drift("E") == doctest::Approx(0.5));
  std::ostringstream out;
  s.write_csv(out);
  CHECK(out.str() == "time,name,value\n0,E,1\n0,I2,2\n0.5,E,1.5\n");
}

TEST_CASE("Euler stream function and velocity") {
  const Grid2D g = two_pi_torus(32);
  const ScalarField2D w = ScalarField2D::sample(g, [](const Vec2& p) { return std::sin(2 * p.x1) * std::cos(3 * p.x2); });
  EulerSolver solver(g);
  const ScalarField2D psi = solver.stream_function(w);
  const VectorField2D u = solver.velocity(w);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const Vec2 p = g.center(i, j);
      // lap psi = -w; u = (psi_2, -psi_1).
      CHECK(std::abs(psi.at(i, j) - w.at(i, j) / 13.0) <= 1e-14);
      CHECK(std::abs(u.at(i, j).x1 + 3.0 / 13.0 * std::sin(2 * p.x1) * std::sin(3 * p.x2)) <= 1e-14);
      CHECK(std::abs(u.at(i, j).x2 + 2.0 / 13.0 * std::cos(2 * p.x1) * std::cos(3 * p.x2)) <= 1e-14);
    }
  CHECK_THROWS_AS(EulerSolver(Grid2D::torus(24, 32, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(EulerSolver(Grid2D::box(32, 32, {0, 0}, {1, 1})), std::invalid_argument);
}

TEST_CASE("Euler steady states") {
  const Grid2D g = two_pi_torus(128);
  SUBCASE("shear") {
    const ScalarField2D w = ScalarField2D::sample(g, [](const Vec2& p) { return std::sin(p.x1); });
    const EulerRunResult r = euler_run({w, 0.0}, 1.0, 1e-2, {});
    CHECK(max_abs_diff(r.final_state.vorticity.values, w.values) <= 1e-8);
  }
  SUBCASE("Taylor-Green") {
    const ScalarField2D w = ScalarField2D::sample(g, [](const Vec2& p) { return std::sin(p.x1) * std::sin(p.x2); });
    const EulerRunResult r = euler_run({w, 0.0}, 1.0, 1e-3, {1, 2});
    CHECK(max_abs_diff(r.final_state.vorticity.values, w.values) <= 1e-6);
    // Closed forms on [0, 2 pi)^2: integral of w is 0, of w^2 is pi^2, and
    // psi = w / 2 gives energy pi^2 / 4.
    CHECK(std::abs(r.series.values("I1").front()) <= 1e-12);
    CHECK(r.series.values("I2").front() == doctest::Approx(kPi * kPi).epsilon(1e-12));
    CHECK(r.series.values("E").front() == doctest::Approx(kPi * kPi / 4).epsilon(1e-12));
  }
}

TEST_CASE("Euler conserves energy and enstrophy moments") {
  const Grid2D g = two_pi_torus(128);
  const ScalarField2D w = smooth_vorticity(g, 5);
  const EulerRunResult r = euler_run({w, 0.0}, 1.0, 1e-3, {1, 2, 3, 4, 5});
  CHECK(r.steps == 1000);
  CHECK(r.warnings.empty());
  // The flow is not trivially steady.
  CHECK(max_abs_diff(r.final_state.vorticity.values, w.values) > 0.5);
  for (const char* name : {"E", "I2", "I3", "I4", "I5"}) CHECK(r.series.relative_drift(name) <= 1e-6);
  // Mean vorticity over the 4 pi^2 torus.
  for (double m : r.series.values("I1")) CHECK(std::abs(m) / (4 * kPi * kPi) <= 1e-14);
}

TEST_CASE("Euler steps are deterministic and flag large CFL numbers") {
  const Grid2D g = two_pi_torus(32);
  const EulerState s{smooth_vorticity(g, 8), 0.0};
  const EulerState a = euler_step(s, 1e-2), b = euler_step(s, 1e-2);
  CHECK(a.vorticity.values == b.vorticity.values);
  CHECK(a.time == doctest::Approx(1e-2));
  const EulerRunResult r = euler_run(s, 2.0, 1.0, {});
  CHECK(r.max_cfl > 1.0);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("CFL") != std::string::npos);
  CHECK_THROWS_AS(enstrophy_moments(s, {9}), std::invalid_argument);
}
