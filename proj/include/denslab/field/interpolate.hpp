// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "denslab/field/grid.hpp"

namespace denslab {

enum class InterpOrder { linear, cubic };

// Point evaluation of a grid field. Periodic wrap on tori. On boxes the
// point must lie inside the box; within half a cell of an edge the stencil
// is clamped to the edge values.
double interpolate(const ScalarField2D& f, const Vec2& p,
                   InterpOrder order = InterpOrder::linear);

Vec2 interpolate(const VectorField2D& f, const Vec2& p,
                 InterpOrder order = InterpOrder::linear);

// Velocity closure backed by a grid field.
VelocityFunction as_velocity(VectorField2D field,
                             InterpOrder order = InterpOrder::linear);

}  // namespace denslab
