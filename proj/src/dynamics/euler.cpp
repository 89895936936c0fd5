// SPDX-License-Identifier: Apache-2.0
#include "denslab/dynamics/euler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "denslab/core/parallel.hpp"

namespace denslab {
namespace {

using Spectrum = std::vector<std::complex<double>>;

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Signed wavenumber index of FFT bin j on an axis of n points.
int signed_mode(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace

struct EulerSolver::Impl {
  Grid2D grid;
  int nx, ny, nh;  // nh = nx / 2 + 1 complex columns
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  std::vector<double> kx, ky;    // derivative multipliers, zero on Nyquist
  std::vector<double> inv_lap;   // 1 / |k|^2, zero on the mean mode
  std::vector<double> keep;      // 2/3-rule mask

  explicit Impl(const Grid2D& g) : grid(g), nx(g.nx()), ny(g.ny()), nh(g.nx() / 2 + 1) {
    if (!g.periodic()) throw std::invalid_argument("EulerSolver: grid must be a torus");
    if (!power_of_two(nx) || !power_of_two(ny))
      throw std::invalid_argument("EulerSolver: grid sizes must be powers of two");
    real = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
    spec = fftw_alloc_complex(static_cast<std::size_t>(nh) * ny);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      forward = fftw_plan_dft_r2c_2d(ny, nx, real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_2d(ny, nx, spec, real, FFTW_ESTIMATE);
    }
    const double cx = 2.0 * std::numbers::pi / g.lx(), cy = 2.0 * std::numbers::pi / g.ly();
    const std::size_t m = static_cast<std::size_t>(nh) * ny;
    kx.resize(m);
    ky.resize(m);
    inv_lap.resize(m);
    keep.resize(m);
    for (int j = 0; j < ny; ++j) {
      const int my = signed_mode(j, ny);
      for (int i = 0; i < nh; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * nh + i;
        const double ax = cx * i, ay = cy * my;
        kx[k] = 2 * i == nx ? 0.0 : ax;
        ky[k] = 2 * j == ny ? 0.0 : ay;
        const double l = ax * ax + ay * ay;
        inv_lap[k] = l > 0.0 ? 1.0 / l : 0.0;
        keep[k] = (3 * i < nx && 3 * std::abs(my) < ny) ? 1.0 : 0.0;
      }
    }
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }

  std::size_t nreal() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t nspec() const { return static_cast<std::size_t>(nh) * ny; }

  Spectrum to_spectrum(const std::vector<double>& v) {
    std::copy(v.begin(), v.end(), real);
    fftw_execute(forward);
    Spectrum s(nspec());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {spec[k][0], spec[k][1]};
    return s;
  }

  // c2r overwrites its input, so the spectrum is copied into the buffer.
  std::vector<double> to_physical(const Spectrum& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      spec[k][0] = s[k].real();
      spec[k][1] = s[k].imag();
    }
    fftw_execute(backward);
    const double scale = 1.0 / static_cast<double>(nreal());
    std::vector<double> v(nreal());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = real[k] * scale;
    return v;
  }

  // i * mult * s
  Spectrum derivative(const Spectrum& s, const std::vector<double>& mult, double sign = 1.0) {
    Spectrum d(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) d[k] = std::complex<double>(0.0, sign * mult[k]) * s[k];
    return d;
  }

  Spectrum stream(const Spectrum& w) {
    Spectrum psi(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) psi[k] = w[k] * inv_lap[k];
    return psi;
  }

  // u = psi_2, v = -psi_1.
  std::pair<std::vector<double>, std::vector<double>> velocity(const Spectrum& w) {
    const Spectrum psi = stream(w);
    return {to_physical(derivative(psi, ky)), to_physical(derivative(psi, kx, -1.0))};
  }

  // Dealiased -(u . grad w) in spectral space; the mean mode is left alone.
  Spectrum rhs(const Spectrum& w) {
    const auto [u, v] = velocity(w);
    const std::vector<double> wx = to_physical(derivative(w, kx));
    const std::vector<double> wy = to_physical(derivative(w, ky));
    std::vector<double> adv(nreal());
    parallel_for(static_cast<std::int64_t>(adv.size()), [&](std::int64_t k) {
      adv[k] = u[k] * wx[k] + v[k] * wy[k];
    });
    Spectrum n = to_spectrum(adv);
    for (std::size_t k = 0; k < n.size(); ++k) n[k] *= -keep[k];
    n[0] = 0.0;
    return n;
  }

  Spectrum project(Spectrum w) {
    for (std::size_t k = 1; k < w.size(); ++k) w[k] *= keep[k];
    return w;
  }
};

EulerSolver::EulerSolver(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {}
EulerSolver::~EulerSolver() = default;
EulerSolver::EulerSolver(EulerSolver&&) noexcept = default;
EulerSolver& EulerSolver::operator=(EulerSolver&&) noexcept = default;

const Grid2D& EulerSolver::grid() const { return impl_->grid; }

EulerState EulerSolver::step(const EulerState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be positive");
  if (!(state.vorticity.grid == impl_->grid))
    throw std::invalid_argument("euler_step: state grid does not match the solver");
  Impl& s = *impl_;
  const Spectrum w0 = s.project(s.to_spectrum(state.vorticity.values));
  const std::size_t m = w0.size();
  const auto stage = [&](const Spectrum& k, double h) {
    Spectrum w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = w0[i] + h * k[i];
    return w;
  };
  const Spectrum k1 = s.rhs(w0);
  const Spectrum k2 = s.rhs(stage(k1, 0.5 * dt));
  const Spectrum k3 = s.rhs(stage(k2, 0.5 * dt));
  const Spectrum k4 = s.rhs(stage(k3, dt));
  Spectrum w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = w0[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return {ScalarField2D(s.grid, s.to_physical(w)), state.time + dt};
}

ScalarField2D EulerSolver::stream_function(const ScalarField2D& vorticity) {
  return ScalarField2D(impl_->grid, impl_->to_physical(impl_->stream(impl_->to_spectrum(vorticity.values))));
}

VectorField2D EulerSolver::velocity(const ScalarField2D& vorticity) {
  auto [u, v] = impl_->velocity(impl_->to_spectrum(vorticity.values));
  VectorField2D out(impl_->grid);
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

double EulerSolver::cfl(const ScalarField2D& vorticity, double dt) {
  const VectorField2D u = velocity(vorticity);
  double vmax = 0.0;
  for (std::size_t k = 0; k < u.u.size(); ++k) vmax = std::max(vmax, std::hypot(u.u[k], u.v[k]));
  return vmax * dt / std::min(impl_->grid.hx(), impl_->grid.hy());
}

EulerState euler_step(const EulerState& state, double dt) {
  return EulerSolver(state.vorticity.grid).step(state, dt);
}

double euler_energy(const EulerState& state) {
  const VectorField2D u = EulerSolver(state.vorticity.grid).velocity(state.vorticity);
  double e = 0.0;
  for (std::size_t k = 0; k < u.u.size(); ++k) e += u.u[k] * u.u[k] + u.v[k] * u.v[k];
  return 0.5 * e * state.vorticity.grid.cell_area();
}

std::vector<double> enstrophy_moments(const EulerState& state, const std::vector<int>& ks) {
  std::vector<double> out;
  out.reserve(ks.size());
  for (int k : ks) {
    if (k < 1 || k > 8) throw std::invalid_argument("enstrophy_moments: power must be in [1, 8]");
    double s = 0.0;
    for (double w : state.vorticity.values) {
      double p = w;
      for (int e = 1; e < k; ++e) p *= w;
      s += p;
    }
    out.push_back(s * state.vorticity.grid.cell_area());
  }
  return out;
}

EulerRunResult euler_run(const EulerState& initial, double t_final, double dt,
                         const std::vector<int>& moments, const EulerObserver& observer) {
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("euler_run: need t_final >= 0 and dt > 0");
  EulerSolver solver(initial.vorticity.grid);
  EulerRunResult out{initial, {}, 0, 0.0, {}};
  const auto record = [&](const EulerState& s) {
    out.series.append(s.time, "E", euler_energy(s));
    const std::vector<double> m = enstrophy_moments(s, moments);
    for (std::size_t i = 0; i < moments.size(); ++i)
      out.series.append(s.time, "I" + std::to_string(moments[i]), m[i]);
  };
  const int steps = static_cast<int>(std::ceil(t_final / dt - 1e-9));
  const double t0 = initial.time;
  EulerState s = initial;
  record(s);
  for (int k = 0; k < steps; ++k) {
    const double t_next = k + 1 == steps ? t0 + t_final : t0 + (k + 1) * dt;
    const double h = t_next - s.time;
    const double c = solver.cfl(s.vorticity, h);
    out.max_cfl = std::max(out.max_cfl, c);
    if (c > 1.0 && out.warnings.empty()) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "CFL number %.2f above 1 at t = %.4g", c, s.time);
      out.warnings.emplace_back(msg);
    }
    s = solver.step(s, h);
    s.time = t_next;
    record(s);
    ++out.steps;
    if (observer) observer(s, out.steps);
  }
  out.final_state = std::move(s);
  return out;
}

}  // namespace denslab
