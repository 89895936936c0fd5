// SPDX-License-Identifier: Apache-2.0
#include "denslab/dynamics/sg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "denslab/density/functionals.hpp"

namespace denslab {
namespace {

ParticleDensity displaced(const ParticleDensity& p, const std::vector<Vec2>& v, double h) {
  std::vector<Vec2> y(p.positions);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + h * v[i];
  return ParticleDensity(std::move(y), p.weights, p.domain);
}

SGState with_positions(const SGState& s, std::vector<Vec2> y, double time) {
  return {ParticleDensity(std::move(y), s.particles.weights, s.particles.domain), s.reference, time};
}

Vec2 center(const ParticleDensity& p) {
  Vec2 c{};
  for (std::size_t i = 0; i < p.size(); ++i) c = c + p.weights[i] * p.positions[i];
  return c;
}

// sum_b h(nu_b / mu_b) mu_b over bins where the reference has mass.
double binned_casimir(int k, const ParticleDensity& nu, const ParticleDensity& mu, const Grid2D& g) {
  const GridDensity bn = bin_particles(nu, g), bm = bin_particles(mu, g);
  const MomentFunction h = MomentFunction::power(k);
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (bm.values[c] > 0.0) s += h(bn.values[c] / bm.values[c]) * bm.values[c];
  return s * g.cell_area();
}

}  // namespace

OtDriver OtDriver::exact() { return OtDriver(OtMethod::exact); }

SGVelocityForm parse_sg_velocity_form(const std::string& s) {
  if (s == "debiased") return SGVelocityForm::debiased;
  if (s == "raw") return SGVelocityForm::raw;
  throw std::invalid_argument("unknown velocity form '" + s + "' (expected debiased or raw)");
}

OtDriver OtDriver::sinkhorn(SinkhornConfig cfg, SGVelocityForm form) {
  if (form == SGVelocityForm::debiased && !cfg.debias)
    throw std::invalid_argument("OtDriver: the debiased velocity needs a debiased Sinkhorn config");
  OtDriver d(OtMethod::sinkhorn);
  d.form_ = form;
  d.sinkhorn_.emplace(std::move(cfg));
  return d;
}

TransportResult OtDriver::solve(const ParticleDensity& nu, const ParticleDensity& mu) {
  if (method_ == OtMethod::exact) {
    ++work_;
    return w2_exact_small(nu, mu);
  }
  TransportResult r = sinkhorn_->solve(nu, mu);
  work_ += r.iterations;
  if (!r.converged) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "sinkhorn: marginal error %.3e after %d iterations",
                  r.marginal_error, r.iterations);
    throw TransportError(msg, r.marginal_error);
  }
  return r;
}

SGVelocity sg_velocity(const SGState& state, OtDriver& ot) {
  const TransportResult r = ot.solve(state.particles, state.reference);
  const std::vector<Vec2> t = r.map.empty() ? optimal_map(r, state.particles, state.reference) : r.map;
  const bool debiased = ot.velocity_form() == SGVelocityForm::debiased;
  const std::vector<Vec2>& from = debiased ? r.source_self_map : state.particles.positions;
  SGVelocity out{std::vector<Vec2>(t.size()), -0.5 * r.reported_cost()};
  for (std::size_t i = 0; i < t.size(); ++i) out.velocity[i] = rotate_j(t[i] - from[i]);
  return out;
}

double sg_hamiltonian(const SGState& state, OtDriver& ot) {
  return -0.5 * ot.solve(state.particles, state.reference).reported_cost();
}

ParticleDensity sunflower_disc(std::size_t n, double radius, Vec2 c) {
  if (n == 0 || !(radius > 0.0)) throw std::invalid_argument("sunflower_disc: need n > 0 and radius > 0");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec2> p(n);
  Vec2 mean{};
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius * std::sqrt((i + 0.5) / static_cast<double>(n));
    const double t = golden * static_cast<double>(i);
    p[i] = {r * std::cos(t), r * std::sin(t)};
    mean += p[i];
  }
  mean *= 1.0 / static_cast<double>(n);
  for (Vec2& q : p) q = q - mean + c;
  return ParticleDensity::equal_weights(std::move(p));
}

double invariant_K(const Density& nu) {
  if (const auto* p = std::get_if<ParticleDensity>(&nu)) {
    double s = 0.0;
    for (std::size_t i = 0; i < p->size(); ++i) s += p->weights[i] * norm2(p->positions[i]);
    return s;
  }
  const auto& g = std::get<GridDensity>(nu);
  double s = 0.0;
  for (int j = 0; j < g.grid.ny(); ++j)
    for (int i = 0; i < g.grid.nx(); ++i) s += norm2(g.grid.center(i, j)) * g.at(i, j);
  return s * g.grid.cell_area();
}

SGIntegrator parse_sg_integrator(const std::string& s) {
  if (s == "rk4") return SGIntegrator::rk4;
  if (s == "midpoint") return SGIntegrator::midpoint;
  throw std::invalid_argument("unknown integrator '" + s + "' (expected rk4 or midpoint)");
}

SGState sg_step(const SGState& state, double dt, SGIntegrator integrator, OtDriver& ot,
                const SGVelocity* k1, SGStepInfo* info) {
  if (!(dt > 0.0)) throw std::invalid_argument("sg_step: dt must be positive");
  SGVelocity own;
  if (!k1) {
    own = sg_velocity(state, ot);
    k1 = &own;
  }
  const ParticleDensity& p = state.particles;
  const std::size_t n = p.size();
  std::vector<Vec2> y(p.positions);

  if (integrator == SGIntegrator::rk4) {
    const auto at = [&](const std::vector<Vec2>& v, double h) {
      return SGState{displaced(p, v, h), state.reference, state.time};
    };
    const std::vector<Vec2> v2 = sg_velocity(at(k1->velocity, 0.5 * dt), ot).velocity;
    const std::vector<Vec2> v3 = sg_velocity(at(v2, 0.5 * dt), ot).velocity;
    const std::vector<Vec2> v4 = sg_velocity(at(v3, dt), ot).velocity;
    for (std::size_t i = 0; i < n; ++i)
      y[i] = y[i] + (dt / 6.0) * (k1->velocity[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
    return with_positions(state, std::move(y), state.time + dt);
  }

  // Implicit midpoint by fixed-point iteration from an explicit Euler guess.
  std::vector<Vec2> next = displaced(p, k1->velocity, dt).positions;
  double prev_inc = INFINITY, inc = 0.0;
  int it = 0;
  bool contracted = true;
  for (; it < kMidpointIterations; ++it) {
    std::vector<Vec2> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (p.positions[i] + next[i]);
    const std::vector<Vec2> v = sg_velocity(with_positions(state, std::move(mid), state.time), ot).velocity;
    inc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 z = p.positions[i] + dt * v[i];
      inc = std::max(inc, norm(z - next[i]));
      next[i] = z;
    }
    contracted = inc < prev_inc;
    prev_inc = inc;
    if (inc <= 1e-14) {
      ++it;
      break;
    }
  }
  if (info) *info = {it, contracted, inc};
  return with_positions(state, std::move(next), state.time + dt);
}

SGRunResult sg_run(const SGState& initial, double t_final, double dt, const SGMonitors& monitors,
                   OtDriver& ot, SGIntegrator integrator, const SGObserver& observer) {
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("sg_run: need t_final >= 0 and dt > 0");
  if (!monitors.casimir_powers.empty() && !monitors.casimir_grid)
    throw std::invalid_argument("sg_run: casimir monitors need a binning grid");
  SGRunResult out{initial, {}, 0, false, {}, {}};
  const int steps = static_cast<int>(std::ceil(t_final / dt - 1e-9));
  const double t0 = initial.time;

  const auto record = [&](const SGState& s, const SGVelocity& v) {
    if (monitors.hamiltonian) out.series.append(s.time, "H", v.hamiltonian);
    if (monitors.k) out.series.append(s.time, "K", invariant_K(s.particles));
    for (int k : monitors.casimir_powers)
      out.series.append(s.time, "C" + std::to_string(k),
                        binned_casimir(k, s.particles, s.reference, *monitors.casimir_grid));
    out.centers.push_back(center(s.particles));
  };

  SGState s = initial;
  try {
    SGVelocity v = sg_velocity(s, ot);
    record(s, v);
    for (int k = 0; k < steps; ++k) {
      const double t_next = k + 1 == steps ? t0 + t_final : t0 + (k + 1) * dt;
      SGState next = sg_step(s, t_next - s.time, integrator, ot, &v);
      next.time = t_next;
      s = std::move(next);
      v = sg_velocity(s, ot);
      record(s, v);
      ++out.steps;
      if (observer) observer(s, out.steps);
    }
  } catch (const std::exception& e) {
    out.aborted = true;
    out.error = e.what();
  }
  out.final_state = std::move(s);
  return out;
}

}  // namespace denslab
