// SPDX-License-Identifier: Apache-2.0
#include "denslab/density/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "denslab/core/parallel.hpp"

namespace denslab {

ParticleDensity pushforward(const ParticleMap& phi, Domain domain) {
  if (phi.base.size() != phi.images.size() || phi.base.size() != phi.weights.size())
    throw std::invalid_argument("pushforward: inconsistent particle map");
  std::vector<Vec2> pos(phi.images.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    pos[i] = domain.wrap(phi.images[i]);
    if (!domain.contains(pos[i]))
      throw std::out_of_range("pushforward: image leaves the domain");
  }
  return ParticleDensity(std::move(pos), phi.weights, domain);
}

ParticleDensity pushforward(const MapFunction& phi, const ParticleDensity& nu) {
  std::vector<Vec2> pos(nu.size());
  parallel_for(static_cast<std::int64_t>(pos.size()),
               [&](std::int64_t i) { pos[i] = nu.domain.wrap(phi(nu.positions[i])); });
  for (const Vec2& p : pos)
    if (!nu.domain.contains(p))
      throw std::out_of_range("pushforward: image leaves the domain");
  ParticleDensity out;
  out.positions = std::move(pos);
  out.weights = nu.weights;
  out.domain = nu.domain;
  return out;
}

ParticleDensity3 pushforward_leafwise(const LeafVelocityFunction& velocity, const ParticleDensity3& nu,
                                      double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0))
    throw std::invalid_argument("pushforward_leafwise: need dt > 0 and t_final >= 0");
  if (nu.positions.size() != nu.weights.size())
    throw std::invalid_argument("pushforward_leafwise: positions and weights differ in size");
  const int steps = static_cast<int>(std::ceil(t_final / dt - 1e-9));
  ParticleDensity3 out = nu;
  parallel_for(static_cast<std::int64_t>(out.positions.size()), [&](std::int64_t i) {
    Vec3& p = out.positions[i];
    const double x3 = p.x3;
    const auto v = [&](const Vec2& q) { return velocity({q.x1, q.x2, x3}); };
    Vec2 q{p.x1, p.x2};
    double t = 0.0;
    for (int s = 0; s < steps; ++s) {
      const double h = s + 1 == steps ? t_final - t : dt;
      const Vec2 k1 = v(q), k2 = v(q + 0.5 * h * k1), k3 = v(q + 0.5 * h * k2), k4 = v(q + h * k3);
      q = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    p.x1 = q.x1;
    p.x2 = q.x2;
  });
  return out;
}

namespace {

Vec2 clamp_to(const Grid2D& g, const Vec2& p) {
  if (g.periodic()) return g.wrap(p);
  return {std::fmin(std::fmax(p.x1, g.lo().x1), g.hi().x1),
          std::fmin(std::fmax(p.x2, g.lo().x2), g.hi().x2)};
}

// Foot of the characteristic through x after time dt, integrated backwards
// with classical RK4.
Vec2 departure(const VelocityFunction& v, const Grid2D& g, const Vec2& x, double dt) {
  const Vec2 k1 = v(x);
  const Vec2 k2 = v(clamp_to(g, x - 0.5 * dt * k1));
  const Vec2 k3 = v(clamp_to(g, x - 0.5 * dt * k2));
  const Vec2 k4 = v(clamp_to(g, x - dt * k3));
  return clamp_to(g, x - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace

AdvectionResult pushforward(const VelocityFunction& velocity, const GridDensity& nu,
                            double t_final, double dt, AdvectionOptions opts) {
  if (!(dt > 0.0) || !(t_final >= 0.0))
    throw std::invalid_argument("pushforward: need dt > 0 and t_final >= 0");
  const Grid2D& g = nu.grid;
  const int steps = static_cast<int>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / steps : 0.0;

  // The velocity is steady, so the departure points are shared by all steps.
  std::vector<Vec2> feet(g.size());
  parallel_for(g.ny(), [&](std::int64_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < g.nx(); ++i) feet[g.index(i, j)] = departure(velocity, g, g.center(i, j), h);
  });

  AdvectionStats stats;
  ScalarField2D cur(g, nu.values);
  ScalarField2D next(g);
  const double mass0 = nu.mass();
  for (int s = 0; s < steps; ++s) {
    parallel_for(static_cast<std::int64_t>(g.size()),
                 [&](std::int64_t k) { next.values[k] = interpolate(cur, feet[k], opts.order); });
    double clamped = 0.0;
    double total = 0.0;
    for (double& x : next.values) {
      if (x < 0.0) {
        clamped -= x;
        x = 0.0;
      }
      total += x;
    }
    total *= g.cell_area();
    if (!(total > 0.0)) throw std::runtime_error("pushforward: mass vanished");
    const double factor = mass0 / total;
    for (double& x : next.values) x *= factor;
    stats.min_renormalization = std::min(stats.min_renormalization, factor);
    stats.max_renormalization = std::max(stats.max_renormalization, factor);
    stats.max_clamped_fraction =
        std::max(stats.max_clamped_fraction, clamped * g.cell_area() / mass0);
    std::swap(cur, next);
    ++stats.steps;
  }
  return {GridDensity(g, std::move(cur.values)), stats};
}

AdvectionResult pushforward(const VectorField2D& velocity, const GridDensity& nu,
                            double t_final, double dt, AdvectionOptions opts) {
  if (!(velocity.grid == nu.grid))
    throw std::invalid_argument("pushforward: velocity and density grids differ");
  return pushforward(as_velocity(velocity, opts.order), nu, t_final, dt, opts);
}

}  // namespace denslab
