// SPDX-License-Identifier: Apache-2.0
#pragma once

// Inviscid 2D Euler in vorticity form on a periodic torus,
//   w_t + u . grad w = 0,  lap psi = -w,  u = (psi_2, -psi_1) = X_psi,
// pseudo-spectral with the 2/3 rule and classical RK4. The state is kept on
// the dealiased modes, so the semi-discrete system conserves energy and
// enstrophy exactly; higher vorticity moments are conserved only up to
// truncation error.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "denslab/dynamics/invariants.hpp"
#include "denslab/field/grid.hpp"

namespace denslab {

struct EulerState {
  ScalarField2D vorticity;  // torus grid, power-of-two sizes
  double time = 0.0;
};

class EulerSolver {
 public:
  explicit EulerSolver(const Grid2D& grid);
  ~EulerSolver();
  EulerSolver(EulerSolver&&) noexcept;
  EulerSolver& operator=(EulerSolver&&) noexcept;

  const Grid2D& grid() const;

  EulerState step(const EulerState& state, double dt);
  ScalarField2D stream_function(const ScalarField2D& vorticity);
  VectorField2D velocity(const ScalarField2D& vorticity);
  // max |u| dt / min(hx, hy); above 1 the step is flagged.
  double cfl(const ScalarField2D& vorticity, double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience form building a solver for the state's grid.
EulerState euler_step(const EulerState& state, double dt);

// Integral of |u|^2 / 2.
double euler_energy(const EulerState& state);

// Grid quadrature of w^k for each k (1 <= k <= 8).
std::vector<double> enstrophy_moments(const EulerState& state, const std::vector<int>& ks);

struct EulerRunResult {
  EulerState final_state;
  InvariantSeries series;  // "E" and "I<k>"
  int steps = 0;
  double max_cfl = 0.0;
  std::vector<std::string> warnings;
};

// Steps of dt to time t_final (the last one shortened to land on it),
// recording energy and the requested moments at every step. The observer
// sees the state after every step.
using EulerObserver = std::function<void(const EulerState&, int step)>;
EulerRunResult euler_run(const EulerState& initial, double t_final, double dt,
                         const std::vector<int>& moments, const EulerObserver& observer = {});

}  // namespace denslab
