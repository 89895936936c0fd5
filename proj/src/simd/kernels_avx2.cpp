// SPDX-License-Identifier: Apache-2.0
//
// AVX2 variants. This translation unit is compiled with -mavx2 and must only
// be entered after a runtime CPU check (see dispatch.cpp).
#include "denslab/simd/kernels.hpp"

#include <cmath>
#include <limits>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace denslab::simd {

#if defined(__AVX2__)
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  // Fixed order: (l0 + l2) + (l1 + l3).
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// Cephes-style exp: 2^n * exp(r), |r| <= ln2/2, Pade form for exp(r).
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125E-1)));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212E-6)));

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_add_pd(_mm256_mul_pd(p, rr), _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_add_pd(_mm256_mul_pd(p, rr), _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.00000000000000000009E0));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(e, e));

  // 2^n via exponent-field construction; n + 1023 lies in [1, 2046].
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256d biased = _mm256_add_pd(_mm256_add_pd(n, _mm256_set1_pd(1023.0)), magic);
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

void bracket(const double* fx, const double* fy, const double* gx,
             const double* gy, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(fx + i), _mm256_loadu_pd(gy + i));
    const __m256d b = _mm256_mul_pd(_mm256_loadu_pd(fy + i), _mm256_loadu_pd(gx + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(a, b));
  }
  for (; i < n; ++i) out[i] = fx[i] * gy[i] - fy[i] * gx[i];
}

void central_diff(const double* minus, const double* plus, double scale,
                  double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(plus + i), _mm256_loadu_pd(minus + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, s));
  }
  for (; i < n; ++i) out[i] = (plus[i] - minus[i]) * scale;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d t = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void sq_dist(double px, double py, const double* xs, const double* ys,
             double* out, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(px);
  const __m256d vy = _mm256_set1_pd(py);
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(ys + j));
    _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  for (; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    out[j] = dx * dx + dy * dy;
  }
}

double lse(const double* h, const double* c, double inv_eps, std::size_t n) {
  const __m256d ie = _mm256_set1_pd(inv_eps);
  double m = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= kLanes) {
    __m256d vm = _mm256_set1_pd(m);
    for (; j + kLanes <= n; j += kLanes) {
      const __m256d a = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(h + j), _mm256_loadu_pd(c + j)), ie);
      vm = _mm256_max_pd(vm, a);
    }
    m = hmax(vm);
  }
  for (; j < n; ++j) m = std::fmax(m, (h[j] - c[j]) * inv_eps);
  if (!std::isfinite(m)) return m;

  const __m256d vmax = _mm256_set1_pd(m);
  __m256d acc = _mm256_setzero_pd();
  j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d a = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(h + j), _mm256_loadu_pd(c + j)), ie);
    acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(a, vmax)));
  }
  double s = hsum(acc);
  for (; j < n; ++j) s += std::exp((h[j] - c[j]) * inv_eps - m);
  return m + std::log(s);
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::avx2, bracket, central_diff, axpy,
                                 dot,       sq_dist, lse};
  return table;
}

#else

const KernelTable& avx2_kernels() { return scalar_kernels(); }

#endif

}  // namespace denslab::simd
