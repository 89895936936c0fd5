// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "denslab/density/density.hpp"
#include "denslab/field/interpolate.hpp"

namespace denslab {

// Discretised diffeomorphism: quadrature nodes of the reference measure and
// their images.
struct ParticleMap {
  std::vector<Vec2> base;
  std::vector<double> weights;
  std::vector<Vec2> images;

  std::size_t size() const { return base.size(); }
};

using MapFunction = std::function<Vec2(const Vec2&)>;

// phi_* mu for the base measure carried by the map.
ParticleDensity pushforward(const ParticleMap& phi, Domain domain = Domain::plane());

// Positions are transported, weights kept bitwise. On a torus positions are
// wrapped; leaving a box domain is an error.
ParticleDensity pushforward(const MapFunction& phi, const ParticleDensity& nu);

// Leafwise Hamiltonian transport on Box^2 x [0, 1]: each particle follows
// the in-leaf field v(x1, x2; x3) for time t_final with RK4 steps of dt.
// The x3 coordinate and the weights are copied untouched.
using LeafVelocityFunction = std::function<Vec2(const Vec3&)>;
ParticleDensity3 pushforward_leafwise(const LeafVelocityFunction& velocity, const ParticleDensity3& nu,
                                      double t_final, double dt);

struct AdvectionOptions {
  InterpOrder order = InterpOrder::cubic;
};

struct AdvectionStats {
  int steps = 0;
  double min_renormalization = 1.0;
  double max_renormalization = 1.0;
  double max_clamped_fraction = 0.0;  // per step, relative to the mass
};

struct AdvectionResult {
  GridDensity density;
  AdvectionStats stats;
};

// Semi-Lagrangian transport of a grid density along a steady
// divergence-free velocity for time t_final in steps of dt. Departure
// points come from RK4 backtracking; negative interpolation undershoots are
// clamped to zero and the mass is renormalised every step.
AdvectionResult pushforward(const VelocityFunction& velocity, const GridDensity& nu,
                            double t_final, double dt, AdvectionOptions opts = {});

AdvectionResult pushforward(const VectorField2D& velocity, const GridDensity& nu,
                            double t_final, double dt, AdvectionOptions opts = {});

}  // namespace denslab
