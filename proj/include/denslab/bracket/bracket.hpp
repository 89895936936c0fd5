// SPDX-License-Identifier: Apache-2.0
#pragma once

// Poisson bracket on the density space. For linear functionals
// F_f(nu) = int f d nu the bracket is {F_f, F_g}(nu) = F_{{f, g}}(nu).
//
// Two evaluation paths: polynomial fields use exact derivatives evaluated at
// the support points of nu (machine-precision algebra), grid fields use the
// finite-difference bracket and grid quadrature.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "denslab/bracket/polynomial.hpp"
#include "denslab/density/functionals.hpp"
#include "denslab/field/calculus.hpp"

namespace denslab {

double dens_bracket(const Poly2& f, const Poly2& g, const Density& nu);
double dens_bracket(const ScalarField2D& f, const ScalarField2D& g, const Density& nu);

// {F_f, {F_g, F_h}} + cyclic.
double jacobi_defect(const Poly2& f, const Poly2& g, const Poly2& h, const Density& nu);
double jacobi_defect(const ScalarField2D& f, const ScalarField2D& g,
                     const ScalarField2D& h, const Density& nu);

// int omega(grad f, grad g) d nu with the Euclidean metric, assembled as
// <grad f, J grad g>. Box domains use one-sided stencils at the edges; a
// warning is appended when that happens.
double omega_tau(const ScalarField2D& f, const ScalarField2D& g, const GridDensity& nu,
                 std::vector<std::string>* warnings = nullptr);

// A functional on densities: linear F_f, Casimir C_h against a reference, or
// leaf Casimir C_{h, lambda} with lambda = x3 on the Poisson model manifold.
class Functional {
 public:
  enum class Kind { linear, casimir, leaf_casimir };

  static Functional linear(PointFunction f);
  static Functional linear(const Poly2& f);
  static Functional casimir(MomentFunction h, ReferenceDensity mu);
  static Functional leaf_casimir(MomentFunction h);

  Kind kind() const { return kind_; }
  double operator()(const Density& nu) const;
  double operator()(const ParticleDensity3& nu) const;
  double operator()(const GridDensity3& nu) const;

 private:
  Functional(Kind k) : kind_(k) {}
  Kind kind_;
  PointFunction f_;
  std::optional<MomentFunction> h_;
  std::optional<ReferenceDensity> mu_;
};

}  // namespace denslab
