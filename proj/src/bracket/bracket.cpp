// SPDX-License-Identifier: Apache-2.0
#include "denslab/bracket/bracket.hpp"

#include <stdexcept>

#include "denslab/core/parallel.hpp"
#include "denslab/simd/kernels.hpp"

namespace denslab {
namespace {

// Support points and masses of nu: particles as given, grids as cell
// centres with mass value * cell area.
struct Support {
  std::vector<Vec2> points;
  std::vector<double> masses;
};

Support support_of(const Density& nu) {
  if (const auto* p = std::get_if<ParticleDensity>(&nu)) return {p->positions, p->weights};
  const auto& g = std::get<GridDensity>(nu);
  Support s;
  s.points.reserve(g.grid.size());
  s.masses.reserve(g.grid.size());
  for (int j = 0; j < g.grid.ny(); ++j)
    for (int i = 0; i < g.grid.nx(); ++i) {
      s.points.push_back(g.grid.center(i, j));
      s.masses.push_back(g.at(i, j) * g.grid.cell_area());
    }
  return s;
}

}  // namespace

double dens_bracket(const Poly2& f, const Poly2& g, const Density& nu) {
  const Support s = support_of(nu);
  const std::size_t n = s.points.size();
  const Poly2 f1 = f.d1(), f2 = f.d2(), g1 = g.d1(), g2 = g.d2();
  std::vector<double> a1(n), a2(n), b1(n), b2(n), br(n);
  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t i) {
    const Vec2& x = s.points[i];
    a1[i] = f1(x);
    a2[i] = f2(x);
    b1[i] = g1(x);
    b2[i] = g2(x);
  });
  const auto& k = simd::kernels();
  k.bracket(a1.data(), a2.data(), b1.data(), b2.data(), br.data(), n);
  return k.dot(br.data(), s.masses.data(), n);
}

double dens_bracket(const ScalarField2D& f, const ScalarField2D& g, const Density& nu) {
  return linear_functional(poisson_bracket_fn(f, g), nu);
}

double jacobi_defect(const Poly2& f, const Poly2& g, const Poly2& h, const Density& nu) {
  return dens_bracket(f, poisson_bracket(g, h), nu) +
         dens_bracket(g, poisson_bracket(h, f), nu) +
         dens_bracket(h, poisson_bracket(f, g), nu);
}

double jacobi_defect(const ScalarField2D& f, const ScalarField2D& g,
                     const ScalarField2D& h, const Density& nu) {
  return dens_bracket(f, poisson_bracket_fn(g, h), nu) +
         dens_bracket(g, poisson_bracket_fn(h, f), nu) +
         dens_bracket(h, poisson_bracket_fn(f, g), nu);
}

double omega_tau(const ScalarField2D& f, const ScalarField2D& g, const GridDensity& nu,
                 std::vector<std::string>* warnings) {
  if (!(f.grid == g.grid) || !(f.grid == nu.grid))
    throw std::invalid_argument("omega_tau: grid mismatch");
  if (warnings && !nu.grid.periodic())
    warnings->push_back("omega_tau: one-sided gradient stencils used at box edges");
  const VectorField2D df = grad(f);
  const VectorField2D dg = grad(g);
  // omega(u, v) = <u, J v> with J v = (v_2, -v_1).
  std::vector<double> integrand(f.grid.size());
  for (std::size_t k = 0; k < integrand.size(); ++k)
    integrand[k] = df.u[k] * dg.v[k] + df.v[k] * (-dg.u[k]);
  return simd::kernels().dot(integrand.data(), nu.values.data(), integrand.size()) *
         nu.grid.cell_area();
}

Functional Functional::linear(PointFunction f) {
  Functional out(Kind::linear);
  out.f_ = std::move(f);
  return out;
}

Functional Functional::linear(const Poly2& f) {
  return linear([f](const Vec2& x) { return f(x); });
}

Functional Functional::casimir(MomentFunction h, ReferenceDensity mu) {
  Functional out(Kind::casimir);
  out.h_ = std::move(h);
  out.mu_ = std::move(mu);
  return out;
}

Functional Functional::leaf_casimir(MomentFunction h) {
  Functional out(Kind::leaf_casimir);
  out.h_ = std::move(h);
  return out;
}

double Functional::operator()(const Density& nu) const {
  switch (kind_) {
    case Kind::linear:
      return linear_functional(f_, nu);
    case Kind::casimir: {
      const auto* g = std::get_if<GridDensity>(&nu);
      if (!g) throw std::invalid_argument("Functional: Casimir needs a grid density");
      return casimir_moment(*h_, *g, *mu_);
    }
    case Kind::leaf_casimir:
      break;
  }
  throw std::invalid_argument("Functional: leaf Casimir needs a density on the 3D manifold");
}

double Functional::operator()(const ParticleDensity3& nu) const {
  if (kind_ != Kind::leaf_casimir)
    throw std::invalid_argument("Functional: only leaf Casimirs act on 3D densities");
  return casimir_leaf(*h_, nu);
}

double Functional::operator()(const GridDensity3& nu) const {
  if (kind_ != Kind::leaf_casimir)
    throw std::invalid_argument("Functional: only leaf Casimirs act on 3D densities");
  return casimir_leaf(*h_, nu);
}

}  // namespace denslab
