// SPDX-License-Identifier: Apache-2.0
#include "denslab/bracket/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace denslab {

Poly2::Poly2(int degree) { grow(degree); }

Poly2::Poly2(std::initializer_list<Term> terms) {
  for (const Term& t : terms) add(t.a, t.b, t.coeff);
}

Poly2 Poly2::constant(double c) { return Poly2{{c, 0, 0}}; }
Poly2 Poly2::x1() { return Poly2{{1.0, 1, 0}}; }
Poly2 Poly2::x2() { return Poly2{{1.0, 0, 1}}; }

void Poly2::grow(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("Poly2: degree out of range");
  if (degree <= degree_ && !c_.empty()) return;
  degree_ = degree;
  c_.resize(slot(0, degree) + 1, 0.0);
}

double Poly2::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > degree_) return 0.0;
  return c_[slot(a, b)];
}

void Poly2::set(int a, int b, double c) {
  if (a < 0 || b < 0) throw std::invalid_argument("Poly2: negative exponent");
  grow(std::max(degree_, a + b));
  c_[slot(a, b)] = c;
}

void Poly2::add(int a, int b, double c) { set(a, b, coeff(a, b) + c); }

double Poly2::operator()(const Vec2& p) const {
  double px[kMaxDegree + 1];
  double py[kMaxDegree + 1];
  px[0] = py[0] = 1.0;
  for (int k = 1; k <= degree_; ++k) {
    px[k] = px[k - 1] * p.x1;
    py[k] = py[k - 1] * p.x2;
  }
  double s = 0.0;
  for (int d = 0; d <= degree_; ++d)
    for (int b = 0; b <= d; ++b) s += c_[slot(d - b, b)] * px[d - b] * py[b];
  return s;
}

Poly2 Poly2::d1() const {
  Poly2 out(std::max(degree_ - 1, 0));
  for (int d = 1; d <= degree_; ++d)
    for (int b = 0; b < d; ++b) {
      const int a = d - b;
      out.c_[slot(a - 1, b)] = a * c_[slot(a, b)];
    }
  return out;
}

Poly2 Poly2::d2() const {
  Poly2 out(std::max(degree_ - 1, 0));
  for (int d = 1; d <= degree_; ++d)
    for (int b = 1; b <= d; ++b) out.c_[slot(d - b, b - 1)] = b * c_[slot(d - b, b)];
  return out;
}

Vec2 Poly2::gradient(const Vec2& p) const { return {d1()(p), d2()(p)}; }

Poly2 operator+(const Poly2& f, const Poly2& g) {
  Poly2 out(std::max(f.degree_, g.degree_));
  for (std::size_t k = 0; k < f.c_.size(); ++k) out.c_[k] += f.c_[k];
  for (std::size_t k = 0; k < g.c_.size(); ++k) out.c_[k] += g.c_[k];
  return out;
}

Poly2 operator-(const Poly2& f, const Poly2& g) { return f + (-1.0) * g; }

Poly2 operator*(const Poly2& f, const Poly2& g) {
  Poly2 out(f.degree_ + g.degree_);
  for (int df = 0; df <= f.degree_; ++df)
    for (int bf = 0; bf <= df; ++bf) {
      const double cf = f.c_[Poly2::slot(df - bf, bf)];
      if (cf == 0.0) continue;
      for (int dg = 0; dg <= g.degree_; ++dg)
        for (int bg = 0; bg <= dg; ++bg)
          out.c_[Poly2::slot(df - bf + dg - bg, bf + bg)] += cf * g.c_[Poly2::slot(dg - bg, bg)];
    }
  return out;
}

Poly2 operator*(double s, const Poly2& f) {
  Poly2 out(f);
  for (double& c : out.c_) c *= s;
  return out;
}

std::string Poly2::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (int d = 0; d <= degree_; ++d)
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      const double c = c_[slot(a, b)];
      if (c == 0.0) continue;
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      const double m = std::abs(c);
      const bool bare = d > 0 && m == 1.0;
      if (!bare) os << m;
      const auto var = [&](const char* name, int p, bool lead) {
        if (p == 0) return;
        if (!lead) os << "*";
        os << name;
        if (p > 1) os << "^" << p;
      };
      var("x1", a, bare);
      var("x2", b, bare && a == 0);
      first = false;
    }
  if (first) os << "0";
  return os.str();
}

Poly2 poisson_bracket(const Poly2& f, const Poly2& g) {
  return f.d1() * g.d2() - f.d2() * g.d1();
}

}  // namespace denslab
