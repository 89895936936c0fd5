// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>
#include <vector>

#include "denslab/density/density.hpp"

namespace denslab {

// h : R -> R for the Casimir functionals. Powers are limited to k <= 8;
// tables are piecewise linear and clamped to their end values outside the
// sampled range.
class MomentFunction {
 public:
  static constexpr int kMaxPower = 8;

  static MomentFunction power(int k);
  static MomentFunction table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  bool is_power() const { return std::holds_alternative<Power>(rep_); }
  int exponent() const;

 private:
  struct Power {
    int k;
  };
  struct Table {
    std::vector<double> xs;
    std::vector<double> ys;
  };
  explicit MomentFunction(std::variant<Power, Table> r) : rep_(std::move(r)) {}
  std::variant<Power, Table> rep_;
};

// theta = d(nu) / d(mu) cellwise.
ScalarField2D relative_density(const GridDensity& nu, const ReferenceDensity& mu);

// F_f(nu) = integral of f against nu. Grid field f is sampled directly on a
// matching grid density and interpolated bilinearly at particle positions.
// Sums go through the dispatched dot kernel (fixed order per ISA).
double linear_functional(const ScalarField2D& f, const Density& nu);
double linear_functional(const PointFunction& f, const Density& nu);

// C_h(nu) = integral of h(d nu / d mu) d mu.
double casimir_moment(const MomentFunction& h, const GridDensity& nu,
                      const ReferenceDensity& mu);

// C_{h, lambda}(nu) = integral of h(x3) d nu on the Poisson model manifold.
double casimir_leaf(const MomentFunction& h, const ParticleDensity3& nu);
double casimir_leaf(const MomentFunction& h, const GridDensity3& nu);

}  // namespace denslab
