// SPDX-License-Identifier: Apache-2.0
#pragma once

// Semi-geostrophic flow in geostrophic coordinates. Particles y_i carry the
// current density nu; the Hamiltonian is H(nu) = -W2(mu, nu)^2 / 2 and the
// particle velocity is V_i = J(T(y_i) - y_i), with T the optimal map from nu
// back to the reference cloud mu and J(u1, u2) = (u2, -u1). With this sign
// dH(delta) = sum_i w_i omega(V_i, delta_i), and a rigidly translated copy
// of mu with offset a moves as da/dt = -J a (counterclockwise at unit rate).
//
// With entropic transport the map T is blurred. The debiased velocity
// replaces y_i by the image of y_i under the entropic self-map of nu, which
// makes V the exact symplectic gradient of the reported debiased H and keeps
// translated copies translated. The raw form J(T(y) - y) is kept for
// comparison.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "denslab/dynamics/invariants.hpp"
#include "denslab/transport/transport.hpp"

namespace denslab {

struct SGState {
  ParticleDensity particles;  // nu, geostrophic coordinates
  ParticleDensity reference;  // mu, the discretised reference density
  double time = 0.0;
};

// Optimal transport from the current particles to the reference. A
// Sinkhorn driver keeps its potentials between calls, so successive solves
// along a trajectory start warm.
enum class SGVelocityForm { debiased, raw };
SGVelocityForm parse_sg_velocity_form(const std::string& s);

class OtDriver {
 public:
  static OtDriver exact();
  // The debiased form needs cfg.debias.
  static OtDriver sinkhorn(SinkhornConfig cfg, SGVelocityForm form = SGVelocityForm::debiased);

  OtMethod method() const { return method_; }
  SGVelocityForm velocity_form() const { return form_; }
  TransportResult solve(const ParticleDensity& nu, const ParticleDensity& mu);
  // Total OT iterations (Sinkhorn) or solves (exact) so far.
  long work() const { return work_; }

 private:
  explicit OtDriver(OtMethod m) : method_(m) {}
  OtMethod method_;
  SGVelocityForm form_ = SGVelocityForm::raw;
  std::optional<SinkhornSolver> sinkhorn_;
  long work_ = 0;
};

struct SGVelocity {
  std::vector<Vec2> velocity;
  double hamiltonian;  // -cost / 2 of the same solve
};

SGVelocity sg_velocity(const SGState& state, OtDriver& ot);

double sg_hamiltonian(const SGState& state, OtDriver& ot);

// Equal-weight Vogel (sunflower) disc of n points and the given radius,
// recentred so that its mean is `center`. Quasi-uniform with
// no sparse tails, which keeps entropic transport well conditioned.
ParticleDensity sunflower_disc(std::size_t n, double radius, Vec2 center = {});

// Sum_i w_i |y_i|^2 for particles, grid quadrature of |x|^2 nu for grids.
double invariant_K(const Density& nu);

enum class SGIntegrator { rk4, midpoint };
SGIntegrator parse_sg_integrator(const std::string& s);

struct SGStepInfo {
  int midpoint_iterations = 0;
  bool midpoint_contracted = true;  // last fixed-point increment shrank
  double midpoint_increment = 0.0;  // max |y^(k+1) - y^(k)| at exit
};

inline constexpr int kMidpointIterations = 5;

// One step. If k1 is given it must be the velocity at `state` and saves
// one OT solve.
SGState sg_step(const SGState& state, double dt, SGIntegrator integrator, OtDriver& ot,
                const SGVelocity* k1 = nullptr, SGStepInfo* info = nullptr);

struct SGMonitors {
  bool hamiltonian = true;
  bool k = true;
  // Casimir moments of the binned density against the binned reference.
  std::vector<int> casimir_powers;
  std::optional<Grid2D> casimir_grid;
};

struct SGRunResult {
  SGState final_state;
  InvariantSeries series;
  int steps = 0;
  bool aborted = false;
  std::string error;
  std::vector<Vec2> centers;  // weighted mean position after each step, step 0 first
};

// Integrates to time t_final with steps of dt (the last step is shortened
// to land on t_final). Monitors are sampled at every step including t = 0.
// An OT failure stops the run and returns the partial series. The observer
// sees the state after every completed step.
using SGObserver = std::function<void(const SGState&, int step)>;
SGRunResult sg_run(const SGState& initial, double t_final, double dt, const SGMonitors& monitors,
                   OtDriver& ot, SGIntegrator integrator = SGIntegrator::rk4,
                   const SGObserver& observer = {});

}  // namespace denslab
