// SPDX-License-Identifier: Apache-2.0
#pragma once

// Second-order finite-difference calculus on Grid2D. Central differences in
// the interior and on the torus; second-order one-sided stencils at box
// edges. Orientation: omega = dx1 ^ dx2, {f, g} = f_1 g_2 - f_2 g_1 and
// X_f = (f_2, -f_1), so omega(X_f, X_g) = {f, g}.

#include "denslab/field/grid.hpp"

namespace denslab {

ScalarField2D d_dx1(const ScalarField2D& f);
ScalarField2D d_dx2(const ScalarField2D& f);

VectorField2D grad(const ScalarField2D& f);
VectorField2D ham_field(const ScalarField2D& f);

ScalarField2D poisson_bracket_fn(const ScalarField2D& f, const ScalarField2D& g);

// Pointwise omega(a, b) = a_1 b_2 - a_2 b_1.
ScalarField2D omega_pointwise(const VectorField2D& a, const VectorField2D& b);

struct Hessian2D {
  ScalarField2D f11;
  ScalarField2D f22;
  ScalarField2D f12;  // symmetrised mixed derivative
};

Hessian2D hessian(const ScalarField2D& f);

// det(I + Hess f); requires nx, ny >= 16.
ScalarField2D hessian_det_shifted(const ScalarField2D& f);

// Leafwise canonical bracket in (x1, x2) on every x3 layer.
ScalarField3D bracket_poisson3(const ScalarField3D& f, const ScalarField3D& g);

}  // namespace denslab
