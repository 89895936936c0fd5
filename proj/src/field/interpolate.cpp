// SPDX-License-Identifier: Apache-2.0
#include "denslab/field/interpolate.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace denslab {
namespace {

// Stencil index along one axis: position in cell-index units, i.e.
// s = (x - lo) / h - 0.5 so that s = i at the centre of cell i.
struct Axis {
  int n;
  bool periodic;

  int index(int i) const {
    if (periodic) {
      i %= n;
      return i < 0 ? i + n : i;
    }
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
  }
};

std::array<double, 2> linear_weights(double t) { return {1.0 - t, t}; }

// Four-point Lagrange weights for nodes -1, 0, 1, 2 at offset t in [0, 1).
std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

template <class Values>
double eval(const Grid2D& g, const Values& values, const Vec2& p, InterpOrder order) {
  if (!g.periodic() && !g.contains(p))
    throw std::out_of_range("interpolate: point outside box domain");
  const Vec2 q = g.wrap(p);
  double sx = (q.x1 - g.lo().x1) / g.hx() - 0.5;
  double sy = (q.x2 - g.lo().x2) / g.hy() - 0.5;
  if (!g.periodic()) {
    // Clamp into the span of cell centres.
    sx = std::fmin(std::fmax(sx, 0.0), g.nx() - 1.0);
    sy = std::fmin(std::fmax(sy, 0.0), g.ny() - 1.0);
  }
  const double fx = std::floor(sx);
  const double fy = std::floor(sy);
  const int i0 = static_cast<int>(fx);
  const int j0 = static_cast<int>(fy);
  const double tx = sx - fx;
  const double ty = sy - fy;
  const Axis ax{g.nx(), g.periodic()};
  const Axis ay{g.ny(), g.periodic()};

  if (order == InterpOrder::linear) {
    const auto wx = linear_weights(tx);
    const auto wy = linear_weights(ty);
    double s = 0.0;
    for (int b = 0; b < 2; ++b) {
      const int j = ay.index(j0 + b);
      double row = 0.0;
      for (int a = 0; a < 2; ++a) row += wx[a] * values[g.index(ax.index(i0 + a), j)];
      s += wy[b] * row;
    }
    return s;
  }
  const auto wx = cubic_weights(tx);
  const auto wy = cubic_weights(ty);
  double s = 0.0;
  for (int b = 0; b < 4; ++b) {
    const int j = ay.index(j0 - 1 + b);
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[a] * values[g.index(ax.index(i0 - 1 + a), j)];
    s += wy[b] * row;
  }
  return s;
}

}  // namespace

double interpolate(const ScalarField2D& f, const Vec2& p, InterpOrder order) {
  return eval(f.grid, f.values, p, order);
}

Vec2 interpolate(const VectorField2D& f, const Vec2& p, InterpOrder order) {
  return {eval(f.grid, f.u, p, order), eval(f.grid, f.v, p, order)};
}

VelocityFunction as_velocity(VectorField2D field, InterpOrder order) {
  // Box fields are evaluated at the nearest point of the box.
  return [field = std::move(field), order](const Vec2& p) {
    const Grid2D& g = field.grid;
    if (g.periodic()) return interpolate(field, p, order);
    const Vec2 q{std::fmin(std::fmax(p.x1, g.lo().x1), g.hi().x1),
                 std::fmin(std::fmax(p.x2, g.lo().x2), g.hi().x2)};
    return interpolate(field, q, order);
  };
}

}  // namespace denslab
