// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "denslab/core/vec2.hpp"

namespace denslab {

// Geometry of the base manifold independent of any discretisation.
struct Domain {
  enum class Kind { plane, torus, box };
  Kind kind = Kind::plane;
  Vec2 lo;
  Vec2 hi;

  static Domain plane() { return {}; }
  static Domain torus(Vec2 lo, Vec2 hi) { return {Kind::torus, lo, hi}; }
  static Domain box(Vec2 lo, Vec2 hi) { return {Kind::box, lo, hi}; }

  bool contains(const Vec2& p) const;
  Vec2 wrap(Vec2 p) const;
  friend bool operator==(const Domain&, const Domain&) = default;
};

// Uniform cell-centred grid on a periodic torus or a bounded box. Values
// are stored row-major with x1 varying fastest: index = j * nx + i.
class Grid2D {
 public:
  static constexpr int kMinCells = 8;

  static Grid2D torus(int nx, int ny, double lx, double ly, Vec2 origin = {});
  static Grid2D box(int nx, int ny, Vec2 lo, Vec2 hi);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool periodic() const { return periodic_; }
  Vec2 lo() const { return lo_; }
  Vec2 hi() const { return hi_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double cell_area() const { return hx_ * hy_; }
  double lx() const { return hi_.x1 - lo_.x1; }
  double ly() const { return hi_.x2 - lo_.x2; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  Vec2 center(int i, int j) const {
    return {lo_.x1 + (i + 0.5) * hx_, lo_.x2 + (j + 0.5) * hy_};
  }
  bool contains(const Vec2& p) const;
  // Wraps a point into the fundamental domain (torus only; identity on box).
  Vec2 wrap(Vec2 p) const;
  Domain domain() const {
    return periodic_ ? Domain::torus(lo_, hi_) : Domain::box(lo_, hi_);
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  Grid2D(int nx, int ny, Vec2 lo, Vec2 hi, bool periodic);

  int nx_ = 0;
  int ny_ = 0;
  Vec2 lo_;
  Vec2 hi_;
  bool periodic_ = false;
  double hx_ = 0.0;
  double hy_ = 0.0;
};

using PointFunction = std::function<double(const Vec2&)>;
using VelocityFunction = std::function<Vec2(const Vec2&)>;

struct ScalarField2D {
  Grid2D grid;
  std::vector<double> values;

  explicit ScalarField2D(const Grid2D& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}
  ScalarField2D(const Grid2D& g, std::vector<double> v);

  static ScalarField2D sample(const Grid2D& g, const PointFunction& fn);

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
  bool finite() const;
};

struct VectorField2D {
  Grid2D grid;
  std::vector<double> u;
  std::vector<double> v;

  explicit VectorField2D(const Grid2D& g) : grid(g), u(g.size()), v(g.size()) {}

  Vec2 at(int i, int j) const {
    const auto k = grid.index(i, j);
    return {u[k], v[k]};
  }
  bool finite() const;
};

// Functions on Box^2 x [0, 1] with symplectic leaves {x3 = const}; layer k
// sits at x3 = (k + 0.5) / nz.
struct ScalarField3D {
  static constexpr int kMinLayers = 4;

  Grid2D grid;
  int nz = 0;
  std::vector<double> values;

  ScalarField3D(const Grid2D& g, int layers, double fill = 0.0);

  static ScalarField3D sample(const Grid2D& g, int layers,
                              const std::function<double(const Vec3&)>& fn);

  double x3(int k) const { return (k + 0.5) / nz; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(k) * grid.size() + grid.index(i, j);
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  ScalarField2D layer(int k) const;
  bool finite() const;
};

}  // namespace denslab
