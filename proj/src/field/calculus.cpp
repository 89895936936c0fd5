// SPDX-License-Identifier: Apache-2.0
#include "denslab/field/calculus.hpp"

#include <stdexcept>

#include "denslab/core/parallel.hpp"
#include "denslab/simd/kernels.hpp"

namespace denslab {
namespace {

void require_finite(const ScalarField2D& f, const char* op) {
  if (!f.finite()) throw std::invalid_argument(std::string(op) + ": non-finite input");
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* op) {
  if (!(a == b)) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

// First derivative along x1 of one row of length n.
void diff_row(const double* r, double* out, int n, double h, bool periodic,
              const simd::KernelTable& k) {
  const double s = 0.5 / h;
  k.central_diff(r, r + 2, s, out + 1, static_cast<std::size_t>(n - 2));
  if (periodic) {
    out[0] = (r[1] - r[n - 1]) * s;
    out[n - 1] = (r[0] - r[n - 2]) * s;
  } else {
    out[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) * s;
    out[n - 1] = (3.0 * r[n - 1] - 4.0 * r[n - 2] + r[n - 3]) * s;
  }
}

}  // namespace

ScalarField2D d_dx1(const ScalarField2D& f) {
  const Grid2D& g = f.grid;
  ScalarField2D out(g);
  const auto& k = simd::kernels();
  parallel_for(g.ny(), [&](std::int64_t j) {
    const std::size_t off = g.index(0, static_cast<int>(j));
    diff_row(f.values.data() + off, out.values.data() + off, g.nx(), g.hx(),
             g.periodic(), k);
  });
  return out;
}

ScalarField2D d_dx2(const ScalarField2D& f) {
  const Grid2D& g = f.grid;
  const int nx = g.nx();
  const int ny = g.ny();
  ScalarField2D out(g);
  const auto& k = simd::kernels();
  const double s = 0.5 / g.hy();
  const double* v = f.values.data();
  parallel_for(ny, [&](std::int64_t jj) {
    const int j = static_cast<int>(jj);
    double* o = out.values.data() + g.index(0, j);
    const auto row = [&](int r) { return v + g.index(0, r); };
    if (j > 0 && j < ny - 1) {
      k.central_diff(row(j - 1), row(j + 1), s, o, nx);
    } else if (g.periodic()) {
      k.central_diff(row((j + ny - 1) % ny), row((j + 1) % ny), s, o, nx);
    } else if (j == 0) {
      const double *r0 = row(0), *r1 = row(1), *r2 = row(2);
      for (int i = 0; i < nx; ++i) o[i] = (-3.0 * r0[i] + 4.0 * r1[i] - r2[i]) * s;
    } else {
      const double *r0 = row(ny - 1), *r1 = row(ny - 2), *r2 = row(ny - 3);
      for (int i = 0; i < nx; ++i) o[i] = (3.0 * r0[i] - 4.0 * r1[i] + r2[i]) * s;
    }
  });
  return out;
}

VectorField2D grad(const ScalarField2D& f) {
  require_finite(f, "grad");
  VectorField2D out(f.grid);
  out.u = d_dx1(f).values;
  out.v = d_dx2(f).values;
  return out;
}

VectorField2D ham_field(const ScalarField2D& f) {
  require_finite(f, "ham_field");
  VectorField2D out(f.grid);
  out.u = d_dx2(f).values;
  out.v = d_dx1(f).values;
  for (double& x : out.v) x = -x;
  return out;
}

ScalarField2D poisson_bracket_fn(const ScalarField2D& f, const ScalarField2D& g) {
  require_same_grid(f.grid, g.grid, "poisson_bracket_fn");
  require_finite(f, "poisson_bracket_fn");
  require_finite(g, "poisson_bracket_fn");
  const ScalarField2D f1 = d_dx1(f), f2 = d_dx2(f);
  const ScalarField2D g1 = d_dx1(g), g2 = d_dx2(g);
  ScalarField2D out(f.grid);
  simd::kernels().bracket(f1.values.data(), f2.values.data(), g1.values.data(),
                          g2.values.data(), out.values.data(), out.values.size());
  return out;
}

ScalarField2D omega_pointwise(const VectorField2D& a, const VectorField2D& b) {
  require_same_grid(a.grid, b.grid, "omega_pointwise");
  ScalarField2D out(a.grid);
  simd::kernels().bracket(a.u.data(), a.v.data(), b.u.data(), b.v.data(),
                          out.values.data(), out.values.size());
  return out;
}

namespace {

// Second derivative along a line with stride; one-sided second-order
// stencil (2, -5, 4, -1) at box edges.
void second_diff_line(const double* f, double* out, int n, std::ptrdiff_t stride,
                      double h, bool periodic) {
  const double s = 1.0 / (h * h);
  const auto at = [&](int i) { return f[i * stride]; };
  for (int i = 1; i < n - 1; ++i)
    out[i * stride] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) * s;
  if (periodic) {
    out[0] = (at(1) - 2.0 * at(0) + at(n - 1)) * s;
    out[(n - 1) * stride] = (at(0) - 2.0 * at(n - 1) + at(n - 2)) * s;
  } else {
    out[0] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * s;
    out[(n - 1) * stride] =
        (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) * s;
  }
}

}  // namespace

Hessian2D hessian(const ScalarField2D& f) {
  require_finite(f, "hessian");
  const Grid2D& g = f.grid;
  Hessian2D h{ScalarField2D(g), ScalarField2D(g), ScalarField2D(g)};
  parallel_for(g.ny(), [&](std::int64_t j) {
    const std::size_t off = g.index(0, static_cast<int>(j));
    second_diff_line(f.values.data() + off, h.f11.values.data() + off, g.nx(), 1,
                     g.hx(), g.periodic());
  });
  parallel_for(g.nx(), [&](std::int64_t i) {
    second_diff_line(f.values.data() + i, h.f22.values.data() + i, g.ny(), g.nx(),
                     g.hy(), g.periodic());
  });
  const ScalarField2D a = d_dx1(d_dx2(f));
  const ScalarField2D b = d_dx2(d_dx1(f));
  for (std::size_t k = 0; k < g.size(); ++k)
    h.f12.values[k] = 0.5 * (a.values[k] + b.values[k]);
  return h;
}

ScalarField2D hessian_det_shifted(const ScalarField2D& f) {
  if (f.grid.nx() < 16 || f.grid.ny() < 16)
    throw std::invalid_argument("hessian_det_shifted: need at least 16 cells per axis");
  const Hessian2D h = hessian(f);
  ScalarField2D out(f.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const double a = 1.0 + h.f11.values[k];
    const double d = 1.0 + h.f22.values[k];
    const double b = h.f12.values[k];
    out.values[k] = a * d - b * b;
  }
  return out;
}

ScalarField3D bracket_poisson3(const ScalarField3D& f, const ScalarField3D& g) {
  if (!(f.grid == g.grid) || f.nz != g.nz)
    throw std::invalid_argument("bracket_poisson3: grid mismatch");
  if (!f.finite() || !g.finite())
    throw std::invalid_argument("bracket_poisson3: non-finite input");
  ScalarField3D out(f.grid, f.nz);
  const std::size_t n = f.grid.size();
  for (int k = 0; k < f.nz; ++k) {
    const ScalarField2D b = poisson_bracket_fn(f.layer(k), g.layer(k));
    std::copy(b.values.begin(), b.values.end(), out.values.begin() + k * n);
  }
  return out;
}

}  // namespace denslab
