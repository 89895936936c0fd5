// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace denslab {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x1 += o.x1; x2 += o.x2; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x1 -= o.x1; x2 -= o.x2; return *this; }
  constexpr Vec2& operator*=(double s) { x1 *= s; x2 *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x1, -a.x2}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr double norm2(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }

// Symplectic form on the plane, omega = dx1 ^ dx2.
constexpr double omega(const Vec2& u, const Vec2& v) { return u.x1 * v.x2 - u.x2 * v.x1; }

// Rotation compatible with omega(u, v) = <u, J v>; J(u1, u2) = (u2, -u1).
// Hamiltonian fields are X_f = J grad f.
constexpr Vec2 rotate_j(const Vec2& u) { return {u.x2, -u.x1}; }

struct Vec3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

}  // namespace denslab
