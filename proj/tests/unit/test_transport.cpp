// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "denslab/core/parallel.hpp"
#include "denslab/io/serialize.hpp"
#include "denslab/transport/transport.hpp"
#include "support.hpp"

using namespace denslab;
using namespace denslab::test;

namespace {

ParticleDensity cloud(Rng& rng, std::size_t n) { return ParticleDensity::equal_weights(random_points(rng, n)); }

// Minimum over all permutations of the mean squared distance.
double brute_force_cost(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) c += norm2(a[i] - b[perm[i]]);
    best = std::min(best, c / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SinkhornConfig sharp(const ParticleDensity& a, const ParticleDensity& b, double factor) {
  SinkhornConfig cfg = SinkhornConfig::geometric(factor * diameter_squared(a, b));
  cfg.max_iterations = 50000;
  cfg.tolerance = 1e-6;
  return cfg;
}

}  // namespace

TEST_CASE("exact solver on trivial instances") {
  const ParticleDensity a = ParticleDensity::equal_weights({{0.0, 0.0}});
  const ParticleDensity b = ParticleDensity::equal_weights({{0.3, 0.4}});
  const TransportResult r = w2_exact_small(a, b);
  CHECK(r.cost == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.map[0] == Vec2{0.3, 0.4});

  Rng rng(1);
  const ParticleDensity c = cloud(rng, 12);
  const TransportResult s = w2_exact_small(c, c);
  CHECK(s.cost == 0.0);
  for (int i = 0; i < 12; ++i) CHECK(s.assignment[i] == i);

  CHECK_THROWS_AS(w2_exact_small(cloud(rng, 65), cloud(rng, 65)), std::invalid_argument);
  CHECK_THROWS_AS(w2_exact_small(c, ParticleDensity({{0, 0}}, {0.5})), std::invalid_argument);
}

TEST_CASE("ties go to the lowest index") {
  // Both matchings of a square's opposite corners cost the same.
  const ParticleDensity a = ParticleDensity::equal_weights({{0, 0}, {1, 1}});
  const ParticleDensity b = ParticleDensity::equal_weights({{1, 0}, {0, 1}});
  const TransportResult r = w2_exact_small(a, b);
  CHECK(r.assignment == std::vector<int>{0, 1});
}

TEST_CASE("exact assignment matches brute force over permutations") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const ParticleDensity a = cloud(rng, 4 + t % 4), b = cloud(rng, 4 + t % 4);
    CHECK(w2_exact_small(a, b).cost == doctest::Approx(brute_force_cost(a.positions, b.positions)).epsilon(1e-14));
  }
}

TEST_CASE("unequal weights match the equal-weight expansion") {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    // Weights k/8 with integer k; expanding each point k times gives an
    // equal-weight problem of size 8 solved by brute force.
    const std::vector<int> ks = {3, 1, 4}, ls = {2, 2, 1, 3};
    const auto pa = random_points(rng, ks.size()), pb = random_points(rng, ls.size());
    std::vector<double> wa, wb;
    std::vector<Vec2> ea, eb;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      wa.push_back(ks[i] / 8.0);
      ea.insert(ea.end(), ks[i], pa[i]);
    }
    for (std::size_t j = 0; j < ls.size(); ++j) {
      wb.push_back(ls[j] / 8.0);
      eb.insert(eb.end(), ls[j], pb[j]);
    }
    const TransportResult r = w2_exact_small(ParticleDensity(pa, wa), ParticleDensity(pb, wb));
    CHECK(r.cost == doctest::Approx(brute_force_cost(ea, eb)).epsilon(1e-13));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < ls.size(); ++j) row += r.plan(i, j);
      CHECK(row == doctest::Approx(wa[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact potentials are dual feasible and tight on the plan") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    ParticleDensity a = cloud(rng, 30), b = cloud(rng, 30);
    if (t % 2) {
      std::vector<double> w(30);
      for (double& x : w) x = uniform(rng, 0.2, 1.0);
      a = normalize(ParticleDensity(a.positions, w));
    }
    const TransportResult r = w2_exact_small(a, b);
    double dual = 0.0;
    for (std::size_t i = 0; i < 30; ++i) {
      dual += a.weights[i] * r.source_potential[i] + b.weights[i] * r.target_potential[i];
      for (std::size_t j = 0; j < 30; ++j) {
        const double c = norm2(a.positions[i] - b.positions[j]);
        const double slack = c - r.source_potential[i] - r.target_potential[j];
        CHECK(slack >= -1e-9);
        if (r.plan(i, j) > 1e-12) CHECK(std::abs(slack) <= 1e-9);
      }
    }
    CHECK(dual == doctest::Approx(r.cost).epsilon(1e-10));
  }
}

TEST_CASE("Sinkhorn on coincident and translated clouds") {
  // Dense enough that neighbouring points overlap at the default epsilon;
  // sparse clouds converge very slowly at that scale.
  constexpr std::size_t n = 200;
  Rng rng(3);
  const ParticleDensity a = cloud(rng, n);
  SinkhornSolver s(SinkhornConfig::defaults_for(std::sqrt(diameter_squared(a, a))));
  const TransportResult same = s.solve(a, a);
  CHECK(same.converged);
  CHECK(*same.debiased_cost == 0.0);
  CHECK(same.source_self_map == same.map);

  const Vec2 shift{0.2, -0.1};
  std::vector<Vec2> moved;
  for (const Vec2& p : a.positions) moved.push_back(p + shift);
  const ParticleDensity b = ParticleDensity::equal_weights(moved);
  SinkhornSolver t(SinkhornConfig::defaults_for(std::sqrt(diameter_squared(a, b))));
  const TransportResult r = t.solve(a, b);
  CHECK(r.converged);
  CHECK(*r.debiased_cost == doctest::Approx(norm2(shift)).epsilon(1e-3));
  CHECK(r.cost >= 0.0);
  CHECK(r.reported_cost() == *r.debiased_cost);

  // The exact solver on a subsample sees the same closed form.
  const std::vector<Vec2> sub(a.positions.begin(), a.positions.begin() + 40);
  std::vector<Vec2> sub_moved;
  for (const Vec2& p : sub) sub_moved.push_back(p + shift);
  CHECK(w2_exact_small(ParticleDensity::equal_weights(sub), ParticleDensity::equal_weights(sub_moved)).cost ==
        doctest::Approx(norm2(shift)).epsilon(1e-12));

  // Primal cost and marginals of the stored plan.
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += r.plan(i, j);
      c += r.plan(i, j) * norm2(a.positions[i] - b.positions[j]);
    }
    CHECK(row == doctest::Approx(a.weights[i]).epsilon(1e-8));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += r.plan(i, j);
    CHECK(std::abs(col - b.weights[j]) <= 1e-8);
  }
  CHECK(std::abs(c - r.cost) <= 1e-10);
}

TEST_CASE("Sinkhorn agrees with the exact solver on ten-point clouds") {
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const ParticleDensity a = cloud(rng, 10), b = cloud(rng, 10);
    const double exact = w2_exact_small(a, b).cost;
    SinkhornSolver s(sharp(a, b, 1e-4));
    const TransportResult r = s.solve(a, b);
    CHECK(r.converged);
    CHECK(r.reported_cost() == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("debiased error shrinks as epsilon halves") {
  Rng rng(7);
  std::vector<std::pair<ParticleDensity, ParticleDensity>> suite;
  std::vector<double> exact;
  for (int t = 0; t < 20; ++t) {
    suite.emplace_back(cloud(rng, 10), cloud(rng, 10));
    exact.push_back(w2_exact_small(suite.back().first, suite.back().second).cost);
  }
  double prev = 0.0;
  for (int k = 0; k < 3; ++k) {
    double err = 0.0;
    for (std::size_t t = 0; t < suite.size(); ++t) {
      SinkhornSolver s(sharp(suite[t].first, suite[t].second, 0.016 / (1 << k)));
      err += std::abs(s.solve(suite[t].first, suite[t].second).reported_cost() - exact[t]) / exact[t];
    }
    if (k > 0) CHECK(prev / err >= 1.5);
    prev = err;
  }
}

TEST_CASE("debiased cost gradient matches finite differences") {
  Rng rng(21);
  const ParticleDensity a = cloud(rng, 12), b = cloud(rng, 9);
  SinkhornConfig cfg;
  cfg.epsilons = {0.05};
  cfg.tolerance = 1e-13;
  const TransportResult r = SinkhornSolver(cfg).solve(a, b);
  REQUIRE(r.converged);
  constexpr double h = 1e-5;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 grad = 2.0 * a.weights[i] * (r.source_self_map[i] - r.map[i]);
    for (int d = 0; d < 2; ++d) {
      auto shifted = [&](double s) {
        ParticleDensity p = a;
        (d == 0 ? p.positions[i].x1 : p.positions[i].x2) += s;
        return *SinkhornSolver(cfg).solve(p, b).debiased_cost;
      };
      const double fd = (shifted(h) - shifted(-h)) / (2 * h);
      CHECK(fd == doctest::Approx(d == 0 ? grad.x1 : grad.x2).epsilon(1e-6).scale(1e-3));
    }
  }
}

TEST_CASE("marginal error is monotone at fixed epsilon") {
  Rng rng(11);
  const ParticleDensity a = cloud(rng, 60), b = cloud(rng, 50);
  SinkhornConfig cfg;
  cfg.epsilons = {0.01};
  cfg.tolerance = 1e-12;
  SinkhornSolver s(cfg);
  s.solve(a, b);
  const auto& h = s.error_history();
  REQUIRE(h.size() > 5);
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] * (1 + 1e-12));
}

TEST_CASE("warm starts and thread counts do not change results") {
  Rng rng(12);
  const ParticleDensity a = cloud(rng, 200), b = cloud(rng, 150);
  SinkhornConfig cfg = SinkhornConfig::defaults_for(std::sqrt(diameter_squared(a, b)));
  cfg.relaxation = 1.9;
  SinkhornSolver s(cfg);
  const TransportResult cold = s.solve(a, b);
  const TransportResult warm = s.solve(a, b);
  CHECK(warm.iterations < cold.iterations);
  CHECK(warm.reported_cost() == doctest::Approx(cold.reported_cost()).epsilon(1e-8));

  SinkhornSolver one(s.config()), four(s.config());
  set_num_threads(1);
  const TransportResult r1 = one.solve(a, b);
  set_num_threads(4);
  const TransportResult r4 = four.solve(a, b);
  set_num_threads(1);
  CHECK(r1.cost == r4.cost);
  CHECK(r1.debiased_cost == r4.debiased_cost);
  CHECK(r1.source_potential == r4.source_potential);
}

TEST_CASE("optimal_map") {
  Rng rng(2);
  const ParticleDensity a = cloud(rng, 16);
  const auto id = optimal_map(w2_exact_small(a, a), a, a);
  CHECK(id == a.positions);

  const Vec2 shift{-0.15, 0.3};
  std::vector<Vec2> moved;
  for (const Vec2& p : a.positions) moved.push_back(p + shift);
  const ParticleDensity b = ParticleDensity::equal_weights(moved);
  const auto t = optimal_map(w2_exact_small(a, b), a, b);
  for (std::size_t i = 0; i < 16; ++i) CHECK(norm(t[i] - (a.positions[i] + shift)) <= 1e-6);

  for (int k = 0; k < 5; ++k) {
    const ParticleDensity c = cloud(rng, 8), d = cloud(rng, 8);
    const auto exact = optimal_map(w2_exact_small(c, d), c, d);
    SinkhornSolver s(sharp(c, d, 1e-4));
    const auto ent = optimal_map(s.solve(c, d), c, d);
    const double diam = std::sqrt(diameter_squared(c, d));
    for (std::size_t i = 0; i < 8; ++i) CHECK(norm(ent[i] - exact[i]) <= 5e-2 * diam);
  }

  TransportResult empty;
  empty.rows = 1;
  empty.cols = 1;
  empty.coupling = {0.0};
  CHECK_THROWS_AS(optimal_map(empty, ParticleDensity::equal_weights({{0, 0}}),
                              ParticleDensity::equal_weights({{1, 0}})),
                  std::invalid_argument);
}

TEST_CASE("wass_distance") {
  Rng rng(21);
  SinkhornConfig cfg = SinkhornConfig::defaults_for(std::sqrt(2.0));
  cfg.relaxation = 1.9;
  const Density a = cloud(rng, 40), b = cloud(rng, 40);
  const Density da = cloud(rng, 200), db = cloud(rng, 200);
  CHECK(wass_distance(a, a, OtMethod::exact, cfg) == 0.0);
  CHECK(wass_distance(da, da, OtMethod::sinkhorn, cfg) <= 1e-4);
  const Density p = ParticleDensity::equal_weights({{0, 0}}), q = ParticleDensity::equal_weights({{0.6, 0.8}});
  CHECK(wass_distance(p, q, OtMethod::exact, cfg) == doctest::Approx(1.0).epsilon(1e-15));

  const double ab = wass_distance(a, b, OtMethod::exact, cfg), ba = wass_distance(b, a, OtMethod::exact, cfg);
  CHECK(std::abs(ab - ba) <= 1e-9);
  const double sab = wass_distance(da, db, OtMethod::sinkhorn, cfg);
  const double sba = wass_distance(db, da, OtMethod::sinkhorn, cfg);
  CHECK(std::abs(sab - sba) <= cfg.tolerance * 10);

  for (int t = 0; t < 10; ++t) {
    const Density x = cloud(rng, 12), y = cloud(rng, 12), z = cloud(rng, 12);
    CHECK(wass_distance(x, z, OtMethod::exact, cfg) <=
          wass_distance(x, y, OtMethod::exact, cfg) + wass_distance(y, z, OtMethod::exact, cfg) + 1e-6);
  }
  CHECK(parse_ot_method("exact") == OtMethod::exact);
  CHECK_THROWS_AS(parse_ot_method("simplex"), std::invalid_argument);
}

TEST_CASE("config validation") {
  SinkhornConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilons = {0.1, 0.2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilons = {0.1, 0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilons = {0.1, 0.01};
  cfg.tolerance = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("transport results round-trip through JSON") {
  Rng rng(30);
  const ParticleDensity a = cloud(rng, 9), b = cloud(rng, 7);
  SinkhornSolver s(SinkhornConfig::defaults_for(1.5));
  for (const TransportResult& r : {w2_exact_small(a, b), s.solve(a, b)}) {
    const TransportResult back = io::transport_result_from_json(io::Json::parse(io::to_json(r).dump()));
    CHECK(back.method == r.method);
    CHECK(back.cost == r.cost);
    CHECK(back.debiased_cost == r.debiased_cost);
    CHECK(back.coupling == r.coupling);
    CHECK(back.assignment == r.assignment);
    CHECK(back.source_potential == r.source_potential);
    CHECK(back.map == r.map);
  }
}
