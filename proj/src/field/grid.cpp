// SPDX-License-Identifier: Apache-2.0
#include "denslab/field/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace denslab {

Grid2D::Grid2D(int nx, int ny, Vec2 lo, Vec2 hi, bool periodic)
    : nx_(nx), ny_(ny), lo_(lo), hi_(hi), periodic_(periodic) {
  if (nx < kMinCells || ny < kMinCells)
    throw std::invalid_argument("Grid2D: need at least " +
                                std::to_string(kMinCells) + " cells per axis");
  if (!(hi.x1 > lo.x1) || !(hi.x2 > lo.x2))
    throw std::invalid_argument("Grid2D: empty domain");
  hx_ = (hi.x1 - lo.x1) / nx;
  hy_ = (hi.x2 - lo.x2) / ny;
}

Grid2D Grid2D::torus(int nx, int ny, double lx, double ly, Vec2 origin) {
  return Grid2D(nx, ny, origin, {origin.x1 + lx, origin.x2 + ly}, true);
}

Grid2D Grid2D::box(int nx, int ny, Vec2 lo, Vec2 hi) {
  return Grid2D(nx, ny, lo, hi, false);
}

bool Domain::contains(const Vec2& p) const {
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) return false;
  if (kind != Kind::box) return true;
  return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2;
}

Vec2 Domain::wrap(Vec2 p) const {
  if (kind != Kind::torus) return p;
  const auto w = [](double x, double a, double len) {
    double r = std::fmod(x - a, len);
    if (r < 0.0) r += len;
    if (r >= len) r = 0.0;
    return a + r;
  };
  return {w(p.x1, lo.x1, hi.x1 - lo.x1), w(p.x2, lo.x2, hi.x2 - lo.x2)};
}

bool Grid2D::contains(const Vec2& p) const { return domain().contains(p); }

Vec2 Grid2D::wrap(Vec2 p) const { return domain().wrap(p); }

ScalarField2D::ScalarField2D(const Grid2D& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("ScalarField2D: value count does not match grid");
}

ScalarField2D ScalarField2D::sample(const Grid2D& g, const PointFunction& fn) {
  ScalarField2D f(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f.at(i, j) = fn(g.center(i, j));
  return f;
}

namespace {
bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}
}  // namespace

bool ScalarField2D::finite() const { return all_finite(values); }
bool VectorField2D::finite() const { return all_finite(u) && all_finite(v); }

ScalarField3D::ScalarField3D(const Grid2D& g, int layers, double fill)
    : grid(g), nz(layers) {
  if (layers < kMinLayers)
    throw std::invalid_argument("ScalarField3D: need at least 4 layers");
  values.assign(g.size() * layers, fill);
}

ScalarField3D ScalarField3D::sample(const Grid2D& g, int layers,
                                    const std::function<double(const Vec3&)>& fn) {
  ScalarField3D f(g, layers);
  for (int k = 0; k < layers; ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const Vec2 c = g.center(i, j);
        f.values[f.index(i, j, k)] = fn({c.x1, c.x2, f.x3(k)});
      }
  return f;
}

ScalarField2D ScalarField3D::layer(int k) const {
  const auto begin = values.begin() + static_cast<std::ptrdiff_t>(k * grid.size());
  return ScalarField2D(grid, std::vector<double>(begin, begin + grid.size()));
}

bool ScalarField3D::finite() const { return all_finite(values); }

}  // namespace denslab
