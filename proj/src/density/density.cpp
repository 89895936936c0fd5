// SPDX-License-Identifier: Apache-2.0
#include "denslab/density/density.hpp"

#include <cmath>
#include <stdexcept>

namespace denslab {
namespace {

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

GridDensity::GridDensity(const Grid2D& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("GridDensity: value count does not match grid");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("GridDensity: values must be finite and nonnegative");
}

GridDensity GridDensity::from_function(const Grid2D& g, const PointFunction& fn) {
  return GridDensity(g, ScalarField2D::sample(g, fn).values);
}

double GridDensity::mass() const { return ordered_sum(values) * grid.cell_area(); }

ParticleDensity::ParticleDensity(std::vector<Vec2> pos, std::vector<double> w, Domain d)
    : positions(std::move(pos)), weights(std::move(w)), domain(d) {
  if (positions.size() != weights.size())
    throw std::invalid_argument("ParticleDensity: positions and weights differ in length");
  for (double x : weights)
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("ParticleDensity: weights must be positive");
  for (const Vec2& p : positions)
    if (!domain.contains(p))
      throw std::invalid_argument("ParticleDensity: position outside domain");
}

ParticleDensity ParticleDensity::equal_weights(std::vector<Vec2> pos, Domain d) {
  if (pos.empty()) throw std::invalid_argument("ParticleDensity: empty cloud");
  std::vector<double> w(pos.size(), 1.0 / static_cast<double>(pos.size()));
  return ParticleDensity(std::move(pos), std::move(w), d);
}

double ParticleDensity::mass() const { return ordered_sum(weights); }

double mass(const Density& d) {
  return std::visit([](const auto& x) { return x.mass(); }, d);
}

GridDensity normalize(const GridDensity& d) {
  const double m = d.mass();
  if (!(m > 0.0)) throw std::invalid_argument("normalize: total mass must be positive");
  std::vector<double> v(d.values);
  for (double& x : v) x /= m;
  return GridDensity(d.grid, std::move(v));
}

ParticleDensity normalize(const ParticleDensity& d) {
  const double m = d.mass();
  if (!(m > 0.0)) throw std::invalid_argument("normalize: total mass must be positive");
  std::vector<double> w(d.weights);
  for (double& x : w) x /= m;
  return ParticleDensity(d.positions, std::move(w), d.domain);
}

Density normalize(const Density& d) {
  return std::visit([](const auto& x) -> Density { return normalize(x); }, d);
}

ReferenceDensity::ReferenceDensity(GridDensity d) : density_(std::move(d)) {
  for (double x : density_.values)
    if (!(x > 0.0))
      throw std::invalid_argument("ReferenceDensity: must be strictly positive");
  if (std::abs(density_.mass() - 1.0) > 1e-12) density_ = normalize(density_);
}

ReferenceDensity ReferenceDensity::uniform(const Grid2D& g) {
  const double area = g.lx() * g.ly();
  return ReferenceDensity(GridDensity(g, std::vector<double>(g.size(), 1.0 / area)));
}

ParticleDensity to_particles(const GridDensity& d, double min_mass) {
  std::vector<Vec2> pos;
  std::vector<double> w;
  const double area = d.grid.cell_area();
  for (int j = 0; j < d.grid.ny(); ++j)
    for (int i = 0; i < d.grid.nx(); ++i) {
      const double m = d.at(i, j) * area;
      if (m < min_mass) continue;
      pos.push_back(d.grid.center(i, j));
      w.push_back(m);
    }
  if (pos.empty()) throw std::invalid_argument("to_particles: no cell above mass floor");
  return normalize(ParticleDensity(std::move(pos), std::move(w), d.grid.domain()));
}

GridDensity bin_particles(const ParticleDensity& p, const Grid2D& g) {
  std::vector<double> mass(g.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec2 q = g.wrap(p.positions[k]);
    if (!g.contains(q)) throw std::out_of_range("bin_particles: particle outside grid");
    int i = static_cast<int>(std::floor((q.x1 - g.lo().x1) / g.hx()));
    int j = static_cast<int>(std::floor((q.x2 - g.lo().x2) / g.hy()));
    i = std::min(std::max(i, 0), g.nx() - 1);
    j = std::min(std::max(j, 0), g.ny() - 1);
    mass[g.index(i, j)] += p.weights[k];
  }
  for (double& m : mass) m /= g.cell_area();
  return GridDensity(g, std::move(mass));
}

}  // namespace denslab
