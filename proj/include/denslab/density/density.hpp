// SPDX-License-Identifier: Apache-2.0
#pragma once

// Probability densities on the base manifold, in grid form (cell values are
// densities per unit area, mass = sum value * cell area) or as weighted
// particle clouds.

#include <variant>
#include <vector>

#include "denslab/field/grid.hpp"

namespace denslab {

struct GridDensity {
  Grid2D grid;
  std::vector<double> values;

  GridDensity(const Grid2D& g, std::vector<double> v);
  static GridDensity from_function(const Grid2D& g, const PointFunction& fn);

  double mass() const;
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

struct ParticleDensity {
  std::vector<Vec2> positions;
  std::vector<double> weights;
  Domain domain = Domain::plane();

  ParticleDensity() = default;
  ParticleDensity(std::vector<Vec2> pos, std::vector<double> w,
                  Domain d = Domain::plane());
  static ParticleDensity equal_weights(std::vector<Vec2> pos,
                                       Domain d = Domain::plane());

  std::size_t size() const { return positions.size(); }
  double mass() const;
};

using Density = std::variant<GridDensity, ParticleDensity>;

double mass(const Density& d);

// Scales to unit mass. Throws on zero or negative total mass.
GridDensity normalize(const GridDensity& d);
ParticleDensity normalize(const ParticleDensity& d);
Density normalize(const Density& d);

// The reference density d(mu); for the symplectic plane it is the area form,
// uniform on the grid domain.
class ReferenceDensity {
 public:
  explicit ReferenceDensity(GridDensity d);
  static ReferenceDensity uniform(const Grid2D& g);

  const GridDensity& density() const { return density_; }
  const Grid2D& grid() const { return density_.grid; }

 private:
  GridDensity density_;
};

// Densities on the Poisson model manifold Box^2 x [0, 1].
struct ParticleDensity3 {
  std::vector<Vec3> positions;
  std::vector<double> weights;
};

struct GridDensity3 {
  Grid2D grid;
  int nz = 0;
  std::vector<double> values;  // layer-major, as ScalarField3D

  double cell_volume() const { return grid.cell_area() / nz; }
  double x3(int k) const { return (k + 0.5) / nz; }
};

// One particle per cell centre with weight equal to the cell mass; cells
// with mass below min_mass are dropped.
ParticleDensity to_particles(const GridDensity& d, double min_mass = 1e-12);

// Histogram of particle mass per cell, returned as a density. Particles
// outside a box grid are an error.
GridDensity bin_particles(const ParticleDensity& p, const Grid2D& g);

}  // namespace denslab
