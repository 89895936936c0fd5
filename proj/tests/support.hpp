// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared generators and independent oracles for the test suites. Nothing in
// here calls into the code paths it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "denslab/bracket/polynomial.hpp"
#include "denslab/core/vec2.hpp"

namespace denslab::test {

inline constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<Vec2> random_points(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<Vec2> p(n);
  for (auto& x : p) x = {uniform(rng, lo, hi), uniform(rng, lo, hi)};
  return p;
}

inline Poly2 random_poly(Rng& rng, int degree) {
  Poly2 p(degree);
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) p.set(d - b, b, uniform(rng, -1.0, 1.0));
  return p;
}

// Independent polynomial representation evaluated on complex arguments:
// a flat list of (coefficient, a, b) terms. Used with complex-step
// differentiation, d/dx f(x) = Im f(x + i h) / h, exact to rounding.
struct TermList {
  struct T {
    double c;
    int a, b;
  };
  std::vector<T> terms;

  static TermList from(const Poly2& p) {
    TermList t;
    for (int a = 0; a <= p.degree(); ++a)
      for (int b = 0; a + b <= p.degree(); ++b)
        if (p.coeff(a, b) != 0.0) t.terms.push_back({p.coeff(a, b), a, b});
    return t;
  }

  static std::complex<double> ipow(std::complex<double> z, int k) {
    std::complex<double> r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
  }

  std::complex<double> operator()(std::complex<double> x, std::complex<double> y) const {
    std::complex<double> s = 0.0;
    for (const T& t : terms) s += t.c * ipow(x, t.a) * ipow(y, t.b);
    return s;
  }

  Vec2 gradient(const Vec2& p) const {
    constexpr double h = 1e-30;
    const auto fx = (*this)({p.x1, h}, {p.x2, 0.0});
    const auto fy = (*this)({p.x1, 0.0}, {p.x2, h});
    return {fx.imag() / h, fy.imag() / h};
  }
};

// Symbolic-free oracle for {f, g}(p).
inline double bracket_oracle(const TermList& f, const TermList& g, const Vec2& p) {
  const Vec2 df = f.gradient(p), dg = g.gradient(p);
  return df.x1 * dg.x2 - df.x2 * dg.x1;
}

// Sum of compactly supported bumps A (1 - |x - c|^2 / R^2)^4 on [-1, 1]^2
// with max |Hess f| <= 0.4, used for the potential vorticity check. Each
// bump has Hessian norm at most 8 |A| / R^2, attained at its centre.
struct BumpField {
  struct Bump {
    Vec2 c;
    double r, a;
  };
  std::vector<Bump> bumps;

  static BumpField seeded(Rng& rng) {
    BumpField f;
    for (int k = 0; k < 2; ++k) {
      const double r = uniform(rng, 0.3, 0.6);
      const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      f.bumps.push_back({{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3)}, r, sign * 0.2 * r * r / 8.0});
    }
    return f;
  }

  double operator()(const Vec2& x) const {
    double v = 0.0;
    for (const Bump& b : bumps) {
      const double s = norm2(x - b.c) / (b.r * b.r);
      if (s < 1.0) v += b.a * std::pow(1.0 - s, 4);
    }
    return v;
  }

  Vec2 gradient(const Vec2& x) const {
    Vec2 g{};
    for (const Bump& b : bumps) {
      const Vec2 d = x - b.c;
      const double s = norm2(d) / (b.r * b.r);
      if (s < 1.0) g += (-8.0 * b.a / (b.r * b.r) * std::pow(1.0 - s, 3)) * d;
    }
    return g;
  }
};

// Composite Gauss-Legendre (5 nodes) on [a, b] with n panels.
template <class Fn>
double gauss_legendre(Fn&& fn, double a, double b, int panels) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                              -0.9061798459386640, 0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) s += w[k] * fn(c + 0.5 * h * x[k]);
  }
  return s * 0.5 * h;
}

}  // namespace denslab::test
