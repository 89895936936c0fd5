// SPDX-License-Identifier: Apache-2.0
#include "denslab/density/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "denslab/core/parallel.hpp"
#include "denslab/field/interpolate.hpp"
#include "denslab/simd/kernels.hpp"

namespace denslab {

MomentFunction MomentFunction::power(int k) {
  if (k < 0 || k > kMaxPower)
    throw std::invalid_argument("MomentFunction: power must lie in [0, 8]");
  return MomentFunction(Power{k});
}

MomentFunction MomentFunction::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw std::invalid_argument("MomentFunction: table needs >= 2 matching samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("MomentFunction: table abscissae must increase");
  return MomentFunction(Table{std::move(xs), std::move(ys)});
}

int MomentFunction::exponent() const {
  if (!is_power()) throw std::logic_error("MomentFunction: not a power");
  return std::get<Power>(rep_).k;
}

double MomentFunction::operator()(double x) const {
  if (const auto* p = std::get_if<Power>(&rep_)) {
    double r = 1.0;
    for (int i = 0; i < p->k; ++i) r *= x;
    return r;
  }
  const auto& t = std::get<Table>(rep_);
  if (x <= t.xs.front()) return t.ys.front();
  if (x >= t.xs.back()) return t.ys.back();
  const auto it = std::upper_bound(t.xs.begin(), t.xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - t.xs.begin()) - 1;
  const double s = (x - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
  return t.ys[i] + s * (t.ys[i + 1] - t.ys[i]);
}

ScalarField2D relative_density(const GridDensity& nu, const ReferenceDensity& mu) {
  if (!(nu.grid == mu.grid()))
    throw std::invalid_argument("relative_density: grid mismatch");
  ScalarField2D theta(nu.grid);
  const auto& m = mu.density().values;
  for (std::size_t k = 0; k < theta.values.size(); ++k) {
    if (!(m[k] > 0.0)) throw std::invalid_argument("relative_density: reference vanishes");
    theta.values[k] = nu.values[k] / m[k];
  }
  return theta;
}

namespace {

double weighted_sum(const std::vector<double>& f, const std::vector<double>& w) {
  return simd::kernels().dot(f.data(), w.data(), f.size());
}

std::vector<double> eval_at(const std::vector<Vec2>& pts, const auto& fn) {
  std::vector<double> out(pts.size());
  parallel_for(static_cast<std::int64_t>(pts.size()),
               [&](std::int64_t i) { out[i] = fn(pts[i]); });
  return out;
}

}  // namespace

double linear_functional(const ScalarField2D& f, const Density& nu) {
  if (const auto* g = std::get_if<GridDensity>(&nu)) {
    if (!(g->grid == f.grid))
      throw std::invalid_argument("linear_functional: grid mismatch");
    return weighted_sum(f.values, g->values) * g->grid.cell_area();
  }
  const auto& p = std::get<ParticleDensity>(nu);
  const auto vals = eval_at(p.positions, [&](const Vec2& x) { return interpolate(f, x); });
  return weighted_sum(vals, p.weights);
}

double linear_functional(const PointFunction& f, const Density& nu) {
  if (const auto* g = std::get_if<GridDensity>(&nu)) {
    const ScalarField2D s = ScalarField2D::sample(g->grid, f);
    return weighted_sum(s.values, g->values) * g->grid.cell_area();
  }
  const auto& p = std::get<ParticleDensity>(nu);
  for (const Vec2& x : p.positions)
    if (!p.domain.contains(x))
      throw std::out_of_range("linear_functional: evaluation outside domain");
  return weighted_sum(eval_at(p.positions, f), p.weights);
}

double casimir_moment(const MomentFunction& h, const GridDensity& nu,
                      const ReferenceDensity& mu) {
  const ScalarField2D theta = relative_density(nu, mu);
  std::vector<double> ht(theta.values.size());
  for (std::size_t k = 0; k < ht.size(); ++k) ht[k] = h(theta.values[k]);
  return weighted_sum(ht, mu.density().values) * nu.grid.cell_area();
}

double casimir_leaf(const MomentFunction& h, const ParticleDensity3& nu) {
  if (nu.positions.size() != nu.weights.size())
    throw std::invalid_argument("casimir_leaf: positions and weights differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < nu.positions.size(); ++i) {
    const double x3 = nu.positions[i].x3;
    if (!(x3 >= 0.0 && x3 <= 1.0))
      throw std::out_of_range("casimir_leaf: x3 outside [0, 1]");
    s += nu.weights[i] * h(x3);
  }
  return s;
}

double casimir_leaf(const MomentFunction& h, const GridDensity3& nu) {
  const std::size_t layer = nu.grid.size();
  if (nu.values.size() != layer * static_cast<std::size_t>(nu.nz))
    throw std::invalid_argument("casimir_leaf: value count does not match grid");
  double s = 0.0;
  for (int k = 0; k < nu.nz; ++k) {
    double m = 0.0;
    for (std::size_t c = 0; c < layer; ++c) m += nu.values[k * layer + c];
    s += h(nu.x3(k)) * m;
  }
  return s * nu.cell_volume();
}

}  // namespace denslab
