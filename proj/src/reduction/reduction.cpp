// SPDX-License-Identifier: Apache-2.0
#include "denslab/reduction/reduction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "denslab/core/parallel.hpp"
#include "denslab/simd/kernels.hpp"

namespace denslab {
namespace {

bool finite(const Vec2& p) { return std::isfinite(p.x1) && std::isfinite(p.x2); }

void check_tangent(const DiscreteDiffeo& phi, const GroupTangent& a, const char* what) {
  if (a.size() != phi.size()) throw std::invalid_argument(std::string(what) + ": tangent size does not match the map");
  for (const Vec2& v : a)
    if (!finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite tangent vector");
}

double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

DiscreteDiffeo DiscreteDiffeo::identity(const ParticleDensity& mu) {
  DiscreteDiffeo d{mu.positions, mu.weights, mu.positions};
  d.validate();
  return d;
}

DiscreteDiffeo DiscreteDiffeo::from(const ParticleDensity& mu, const MapFunction& phi) {
  DiscreteDiffeo d{mu.positions, mu.weights, {}};
  d.images.reserve(mu.size());
  for (const Vec2& p : mu.positions) d.images.push_back(phi(p));
  d.validate();
  return d;
}

void DiscreteDiffeo::validate() const {
  if (base.empty()) throw std::invalid_argument("DiscreteDiffeo: no points");
  if (weights.size() != base.size() || images.size() != base.size())
    throw std::invalid_argument("DiscreteDiffeo: base, weights and images differ in size");
  double total = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("DiscreteDiffeo: weights must be positive");
    if (!finite(base[i]) || !finite(images[i])) throw std::invalid_argument("DiscreteDiffeo: non-finite point");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("DiscreteDiffeo: weights must sum to 1");
}

ParticleDensity DiscreteDiffeo::reference() const { return ParticleDensity(base, weights); }

ParticleDensity DiscreteDiffeo::pushforward() const { return ParticleDensity(images, weights); }

ParticleMap DiscreteDiffeo::as_map() const { return {base, weights, images}; }

double wD_form(const DiscreteDiffeo& phi, const GroupTangent& a, const GroupTangent& b) {
  phi.validate();
  check_tangent(phi, a, "wD_form");
  check_tangent(phi, b, "wD_form");
  std::vector<double> terms(phi.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = phi.weights[i] * omega(a[i], b[i]);
  return sorted_sum(std::move(terms));
}

double pullback_functional(const PointFunction& f, const DiscreteDiffeo& phi) {
  phi.validate();
  std::vector<double> v(phi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(phi.images[i]);
  return simd::kernels().dot(v.data(), phi.weights.data(), v.size());
}

double pullback_functional(const Poly2& f, const DiscreteDiffeo& phi) {
  return pullback_functional([&f](const Vec2& p) { return f(p); }, phi);
}

GroupTangent ham_field_on_group(const Poly2& f, const DiscreteDiffeo& phi) {
  phi.validate();
  const std::size_t n = phi.size();
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * n);
  // W(A, B) = A^T M B with M block diagonal, blocks w_i [[0, 1], [-1, 0]].
  // W(X, delta) = dF(delta) for all delta reads M^T X = dF.
  Eigen::MatrixXd mt = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd df(dim);
  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double w = phi.weights[static_cast<std::size_t>(ii)];
    mt(2 * i, 2 * i + 1) = -w;
    mt(2 * i + 1, 2 * i) = w;
    const Vec2 grad = f.gradient(phi.images[static_cast<std::size_t>(ii)]);
    df(2 * i) = w * grad.x1;
    df(2 * i + 1) = w * grad.x2;
  });
  const Eigen::VectorXd x = mt.partialPivLu().solve(df);
  GroupTangent out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {x(static_cast<Eigen::Index>(2 * i)), x(static_cast<Eigen::Index>(2 * i + 1))};
  return out;
}

double group_bracket(const Poly2& f, const Poly2& g, const DiscreteDiffeo& phi) {
  return wD_form(phi, ham_field_on_group(f, phi), ham_field_on_group(g, phi));
}

ConjectureProbe conjecture_probe(const Poly2& f, const Poly2& g, const DiscreteDiffeo& phi) {
  phi.validate();
  const Poly2 fg = poisson_bracket(f, g);
  ConjectureProbe p;
  p.group_value = group_bracket(f, g, phi);
  double nu = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    nu += phi.weights[i] * fg(phi.images[i]);
    mu += phi.weights[i] * fg(phi.base[i]);
  }
  p.shifted_value = nu - mu;
  p.reference_term = mu;
  return p;
}

}  // namespace denslab
