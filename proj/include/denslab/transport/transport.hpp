// SPDX-License-Identifier: Apache-2.0
#pragma once

// Quadratic-cost optimal transport between particle clouds: an exact
// desk-scale solver used as an oracle and a log-domain entropic solver with
// epsilon scaling and Sinkhorn-divergence debiasing.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "denslab/density/density.hpp"

namespace denslab {

enum class OtMethod { exact, sinkhorn };

OtMethod parse_ot_method(const std::string& s);
std::string to_string(OtMethod m);

struct TransportResult {
  OtMethod method = OtMethod::exact;
  // Primal transport cost of the returned plan, sum_ij plan_ij |x_i - y_j|^2.
  double cost = 0.0;
  // Entropic solver only: dual value of the regularised problem and the
  // debiased Sinkhorn divergence.
  std::optional<double> entropic_cost;
  std::optional<double> debiased_cost;

  std::size_t rows = 0;
  std::size_t cols = 0;
  // For equal-size equal-weight exact problems: target index per source.
  std::vector<int> assignment;
  // Dense row-major coupling; may be omitted for large entropic problems.
  std::vector<double> coupling;

  // Dual variables with phi_i + psi_j <= |x_i - y_j|^2.
  std::vector<double> source_potential;
  std::vector<double> target_potential;

  // Image of each source point under the (barycentric) transport map.
  std::vector<Vec2> map;
  // Debiased entropic solves only: barycentric map of the source onto
  // itself. The gradient of the debiased cost with respect to source point
  // i is 2 w_i (source_self_map_i - map_i).
  std::vector<Vec2> source_self_map;

  double marginal_error = 0.0;
  int iterations = 0;
  bool converged = true;

  // Cost used for Wasserstein distances: debiased when available.
  double reported_cost() const { return debiased_cost.value_or(cost); }
  double plan(std::size_t i, std::size_t j) const;
};

class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, double marginal_error)
      : std::runtime_error(what), marginal_error_(marginal_error) {}
  double marginal_error() const { return marginal_error_; }

 private:
  double marginal_error_;
};

// Exact solver for clouds of at most kMaxExactPoints points. Equal-weight
// equal-size inputs are solved as an assignment problem (shortest
// augmenting paths, ties to the lowest index); general weights by
// successive shortest paths on the transportation network.
inline constexpr std::size_t kMaxExactPoints = 64;
TransportResult w2_exact_small(const ParticleDensity& source, const ParticleDensity& target);

inline constexpr double kRelaxFrom = 1e-2;

struct SinkhornConfig {
  std::vector<double> epsilons;  // strictly decreasing, final > 0
  int max_iterations = 20000;    // per level
  double tolerance = 1e-9;       // L1 marginal error on the final level
  bool debias = true;
  bool store_plan = true;
  // Over-relaxation factor in [1, 2) for the potential updates, used once
  // the marginal error is below kRelaxFrom. 1 gives plain Sinkhorn.
  double relaxation = 1.0;

  // Geometric schedule ending at eps_final.
  static SinkhornConfig geometric(double eps_final, int levels = 4, double ratio = 10.0);
  // Default: 4 levels, final epsilon 1e-3 * diameter^2.
  static SinkhornConfig defaults_for(double diameter);
  void validate() const;
};

// Squared diameter of the union of two clouds.
double diameter_squared(const ParticleDensity& a, const ParticleDensity& b);

// Log-domain Sinkhorn with epsilon scaling. The solver keeps its dual
// potentials between calls and warm-starts on the final epsilon when the
// problem sizes match. The self problems OT(a, a) and OT(b, b) behind the
// debiased cost use a symmetric averaged iteration, as does the main problem
// when both clouds are identical. The returned plan is rounded onto the
// exact marginals; marginal_error reports the largest error of the
// iterates before rounding. Not safe for concurrent use; results are.
class SinkhornSolver {
 public:
  explicit SinkhornSolver(SinkhornConfig cfg);

  TransportResult solve(const ParticleDensity& source, const ParticleDensity& target);

  // Per-iteration L1 marginal errors of the most recent alternating solve
  // (all levels); empty for identical clouds.
  const std::vector<double>& error_history() const { return history_; }
  const SinkhornConfig& config() const { return cfg_; }
  void reset();

 private:
  struct Potentials {
    std::vector<double> f;
    std::vector<double> g;
  };
  struct Iterate;
  Iterate iterate(const ParticleDensity& src, const ParticleDensity& tgt, Potentials& warm,
                  bool record);
  Iterate iterate_self(const ParticleDensity& src, std::vector<double>& warm);

  SinkhornConfig cfg_;
  Potentials warm_;
  std::vector<double> warm_source_;
  std::vector<double> warm_target_;
  std::vector<double> history_;
};

TransportResult w2_sinkhorn(const Density& source, const Density& target,
                            const SinkhornConfig& cfg);

// Barycentric projection T(x_i) = sum_j plan_ij y_j / w_i, or the matched
// point for assignments.
std::vector<Vec2> optimal_map(const TransportResult& result, const ParticleDensity& source,
                              const ParticleDensity& target);

double wass_distance(const Density& a, const Density& b, OtMethod method,
                     const SinkhornConfig& cfg);

}  // namespace denslab
