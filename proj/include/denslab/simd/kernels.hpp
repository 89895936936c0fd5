// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops used by the grid calculus, quadrature and the
// entropic transport solver. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active table is chosen at runtime
// from the CPU feature set and can be overridden for equivalence testing.
//
// Elementwise kernels (bracket, central_diff, axpy, sq_dist) produce
// bitwise-identical results across ISAs. Reductions (dot, lse) use a fixed
// lane-blocked summation order per ISA, so they are deterministic for a
// given ISA but differ from the scalar path in the last bits.

#include <cstddef>
#include <string_view>

namespace denslab::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // out[i] = fx[i]*gy[i] - fy[i]*gx[i]
  void (*bracket)(const double* fx, const double* fy, const double* gx,
                  const double* gy, double* out, std::size_t n);
  // out[i] = (plus[i] - minus[i]) * scale
  void (*central_diff)(const double* minus, const double* plus, double scale,
                       double* out, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[j] = (px - xs[j])^2 + (py - ys[j])^2
  void (*sq_dist)(double px, double py, const double* xs, const double* ys,
                  double* out, std::size_t n);
  // log sum_j exp((h[j] - c[j]) * inv_eps), max-shifted
  double (*lse)(const double* h, const double* c, double inv_eps,
                std::size_t n);
};

const KernelTable& scalar_kernels();
const KernelTable& avx2_kernels();

bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);

// Active table used by the library. Defaults to the best available ISA.
const KernelTable& kernels();
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace denslab::simd
