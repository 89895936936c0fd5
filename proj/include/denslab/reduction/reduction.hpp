// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite-particle model of the diffeomorphism group. A map phi is known by
// the images of quadrature nodes x_i of the reference measure mu; tangent
// vectors X o phi are vectors attached to the images. The group carries
//   W(A, B) = sum_i w_i omega(A_i, B_i),
// and the linear functionals F_f(phi) = sum_i w_i f(phi(x_i)) have
// Hamiltonian fields that should equal X_f o phi. Both that identity and the
// descent of the group bracket to the density bracket are checked here by
// generic linear algebra rather than by construction.

#include <vector>

#include "denslab/bracket/polynomial.hpp"
#include "denslab/density/density.hpp"
#include "denslab/density/pushforward.hpp"

namespace denslab {

struct DiscreteDiffeo {
  std::vector<Vec2> base;
  std::vector<double> weights;  // positive, unit sum
  std::vector<Vec2> images;

  static DiscreteDiffeo identity(const ParticleDensity& mu);
  static DiscreteDiffeo from(const ParticleDensity& mu, const MapFunction& phi);

  std::size_t size() const { return base.size(); }
  // Throws std::invalid_argument on empty, mismatched, non-finite or
  // non-positive data, or weights not summing to 1 within 1e-12.
  void validate() const;

  ParticleDensity reference() const;
  // phi_* mu as a particle density.
  ParticleDensity pushforward() const;
  ParticleMap as_map() const;
};

// Values (X o phi)(x_i).
using GroupTangent = std::vector<Vec2>;

// Per-particle terms are summed in sorted order, so the value is bitwise
// invariant under relabelling equal-weight particles.
double wD_form(const DiscreteDiffeo& phi, const GroupTangent& a, const GroupTangent& b);

// Sum_i w_i f(phi(x_i)), reduced with the same kernel as linear_functional.
double pullback_functional(const PointFunction& f, const DiscreteDiffeo& phi);
double pullback_functional(const Poly2& f, const DiscreteDiffeo& phi);

// Solves W(X, .) = dF_f for X with a dense LU factorisation of the 2N x 2N
// form matrix.
GroupTangent ham_field_on_group(const Poly2& f, const DiscreteDiffeo& phi);

// W(X_{F_f}, X_{F_g}) at phi.
double group_bracket(const Poly2& f, const Poly2& g, const DiscreteDiffeo& phi);

// Side-by-side numbers for the cotangent-bundle comparison; nothing is
// asserted about them. group_value is W at (X_f o phi, X_g o phi), that is
// int {f, g} d nu with nu = phi_* mu. shifted_value is the Lie-Poisson
// value at the shifted momentum nu - mu, int {f, g} d(nu - mu). reference_term
// is their difference, int {f, g} d mu, which vanishes on closed surfaces
// but not on a patch of the plane.
struct ConjectureProbe {
  double group_value = 0.0;
  double shifted_value = 0.0;
  double reference_term = 0.0;
};
ConjectureProbe conjecture_probe(const Poly2& f, const Poly2& g, const DiscreteDiffeo& phi);

}  // namespace denslab
