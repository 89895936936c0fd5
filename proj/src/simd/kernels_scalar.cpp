// SPDX-License-Identifier: Apache-2.0
#include "denslab/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace denslab::simd {
namespace {

void bracket(const double* fx, const double* fy, const double* gx,
             const double* gy, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = fx[i] * gy[i] - fy[i] * gx[i];
}

void central_diff(const double* minus, const double* plus, double scale,
                  double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (plus[i] - minus[i]) * scale;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void sq_dist(double px, double py, const double* xs, const double* ys,
             double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    out[j] = dx * dx + dy * dy;
  }
}

double lse(const double* h, const double* c, double inv_eps, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, (h[j] - c[j]) * inv_eps);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += std::exp((h[j] - c[j]) * inv_eps - m);
  return m + std::log(s);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, bracket, central_diff, axpy,
                                 dot,         sq_dist, lse};
  return table;
}

}  // namespace denslab::simd
