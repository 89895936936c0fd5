// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "denslab/core/vec2.hpp"

namespace denslab {

// Polynomial in (x1, x2) with exact symbolic differentiation. Coefficients
// are stored for monomials x1^a x2^b with a + b <= degree.
class Poly2 {
 public:
  static constexpr int kMaxDegree = 12;

  struct Term {
    double coeff;
    int a;
    int b;
  };

  Poly2() = default;
  explicit Poly2(int degree);
  Poly2(std::initializer_list<Term> terms);

  static Poly2 constant(double c);
  static Poly2 x1();
  static Poly2 x2();

  int degree() const { return degree_; }
  double coeff(int a, int b) const;
  void set(int a, int b, double c);
  void add(int a, int b, double c);

  double operator()(const Vec2& p) const;

  Poly2 d1() const;
  Poly2 d2() const;
  Vec2 gradient(const Vec2& p) const;

  friend Poly2 operator+(const Poly2& f, const Poly2& g);
  friend Poly2 operator-(const Poly2& f, const Poly2& g);
  friend Poly2 operator*(const Poly2& f, const Poly2& g);
  friend Poly2 operator*(double s, const Poly2& f);

  std::string to_string() const;

 private:
  static std::size_t slot(int a, int b) {
    const int d = a + b;
    return static_cast<std::size_t>(d * (d + 1) / 2 + b);
  }
  void grow(int degree);

  int degree_ = 0;
  std::vector<double> c_{0.0};
};

// {f, g} = f_1 g_2 - f_2 g_1, computed symbolically.
Poly2 poisson_bracket(const Poly2& f, const Poly2& g);

}  // namespace denslab
