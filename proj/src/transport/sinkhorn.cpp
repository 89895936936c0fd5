// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

#include "denslab/core/parallel.hpp"
#include "denslab/simd/kernels.hpp"
#include "denslab/transport/transport.hpp"

namespace denslab {
namespace {

// Structure-of-arrays view of a cloud for the SIMD distance kernel.
struct Cloud {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> log_w;
  const std::vector<double>* w = nullptr;

  explicit Cloud(const ParticleDensity& p) : xs(p.size()), ys(p.size()), log_w(p.size()), w(&p.weights) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      xs[i] = p.positions[i].x1;
      ys[i] = p.positions[i].x2;
      log_w[i] = std::log(p.weights[i]);
    }
  }
  std::size_t size() const { return xs.size(); }
};

// out_i = -eps * log sum_j b_j exp((pot_j - |x_i - y_j|^2) / eps)
void softmin(const Cloud& rows, const Cloud& cols, const std::vector<double>& pot, double eps,
             std::vector<double>& out) {
  const std::size_t m = cols.size();
  std::vector<double> h(m);
  for (std::size_t j = 0; j < m; ++j) h[j] = pot[j] + eps * cols.log_w[j];
  const auto& k = simd::kernels();
  const double inv_eps = 1.0 / eps;
  out.resize(rows.size());
  std::vector<double> scratch;
#pragma omp parallel num_threads(num_threads()) private(scratch)
  {
    scratch.resize(m);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(rows.size()); ++i) {
      k.sq_dist(rows.xs[i], rows.ys[i], cols.xs.data(), cols.ys.data(), scratch.data(), m);
      out[i] = -eps * k.lse(h.data(), scratch.data(), inv_eps, m);
    }
  }
}

double weighted(const std::vector<double>& w, const std::vector<double>& v) {
  return simd::kernels().dot(w.data(), v.data(), w.size());
}

// Row marginal error of the plan (f_old, g) given the next f update.
double row_error(const std::vector<double>& a, const std::vector<double>& f_old,
                 const std::vector<double>& f_new, double eps) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    e += a[i] * std::abs(std::exp((f_old[i] - f_new[i]) / eps) - 1.0);
  return e;
}

}  // namespace

SinkhornConfig SinkhornConfig::geometric(double eps_final, int levels, double ratio) {
  if (!(eps_final > 0.0) || levels < 1 || !(ratio > 1.0))
    throw std::invalid_argument("SinkhornConfig: invalid geometric schedule");
  SinkhornConfig cfg;
  for (int l = levels - 1; l >= 0; --l) cfg.epsilons.push_back(eps_final * std::pow(ratio, l));
  return cfg;
}

SinkhornConfig SinkhornConfig::defaults_for(double diameter) {
  return geometric(1e-3 * diameter * diameter);
}

void SinkhornConfig::validate() const {
  if (epsilons.empty()) throw std::invalid_argument("SinkhornConfig: empty epsilon schedule");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw std::invalid_argument("SinkhornConfig: epsilon must be > 0");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw std::invalid_argument("SinkhornConfig: epsilons must strictly decrease");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("SinkhornConfig: tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("SinkhornConfig: max_iterations must be >= 1");
  if (!(relaxation >= 1.0 && relaxation < 2.0))
    throw std::invalid_argument("SinkhornConfig: relaxation must lie in [1, 2)");
}

double diameter_squared(const ParticleDensity& a, const ParticleDensity& b) {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (const auto* p : {&a, &b})
    for (const Vec2& x : p->positions) {
      lo = {std::min(lo.x1, x.x1), std::min(lo.x2, x.x2)};
      hi = {std::max(hi.x1, x.x1), std::max(hi.x2, x.x2)};
    }
  return norm2(hi - lo);
}

namespace {

struct Assembled {
  std::vector<double> plan;
  std::vector<Vec2> map;
  double cost = 0.0;
};

// Dense plan from the potentials, rounded onto the exact marginals: rows
// and columns are scaled down where they exceed their targets and the
// remaining deficit is added as a rank-one correction. The cost change is
// bounded by the marginal error times the largest cost.
Assembled assemble(const Cloud& src, const Cloud& tgt, const std::vector<double>& f,
                   const std::vector<double>& g, double eps) {
  const std::size_t n = src.size(), m = tgt.size();
  const std::vector<double>& a = *src.w;
  const std::vector<double>& b = *tgt.w;
  Assembled out;
  out.plan.resize(n * m);
  std::vector<double> cost(n * m);
  const auto& k = simd::kernels();
  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    double* c = cost.data() + i * m;
    double* p = out.plan.data() + i * m;
    k.sq_dist(src.xs[i], src.ys[i], tgt.xs.data(), tgt.ys.data(), c, m);
    double rs = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      p[j] = std::exp((f[i] + g[j] - c[j]) / eps + src.log_w[i] + tgt.log_w[j]);
      rs += p[j];
    }
    const double scale = std::min(1.0, a[i] / rs);
    for (std::size_t j = 0; j < m; ++j) p[j] *= scale;
  });
  std::vector<double> col_sum(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) col_sum[j] += out.plan[i * m + j];
  std::vector<double> col_scale(m), err_b(m);
  for (std::size_t j = 0; j < m; ++j) {
    col_scale[j] = std::min(1.0, b[j] / col_sum[j]);
    err_b[j] = std::max(0.0, b[j] - col_sum[j] * col_scale[j]);
  }
  std::vector<double> err_a(n);
  double err_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < m; ++j) rs += out.plan[i * m + j] * col_scale[j];
    err_a[i] = std::max(0.0, a[i] - rs);
    err_norm += err_a[i];
  }

  out.map.assign(n, Vec2{});
  std::vector<double> row_cost(n, 0.0);
  parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const double corr = err_norm > 0.0 ? err_a[i] / err_norm : 0.0;
    double cx = 0.0, cy = 0.0, cc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double& p = out.plan[i * m + j];
      p = p * col_scale[j] + corr * err_b[j];
      cx += p * tgt.xs[j];
      cy += p * tgt.ys[j];
      cc += p * cost[i * m + j];
    }
    out.map[i] = {cx / a[i], cy / a[i]};
    row_cost[i] = cc;
  });
  for (double c : row_cost) out.cost += c;
  return out;
}

}  // namespace

struct SinkhornSolver::Iterate {
  std::vector<double> f;
  std::vector<double> g;
  double error = 0.0;
  int iterations = 0;
  double value = 0.0;  // <f, a> + <g, b>
};

SinkhornSolver::SinkhornSolver(SinkhornConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

void SinkhornSolver::reset() {
  warm_ = {};
  warm_source_.clear();
  warm_target_.clear();
  history_.clear();
}

SinkhornSolver::Iterate SinkhornSolver::iterate(const ParticleDensity& source,
                                                const ParticleDensity& target,
                                                Potentials& warm, bool record) {
  const Cloud src(source), tgt(target);
  const std::size_t n = src.size(), m = tgt.size();
  Iterate r;
  r.f.assign(n, 0.0);
  r.g.assign(m, 0.0);
  std::vector<double>& f = r.f;
  std::vector<double>& g = r.g;
  std::vector<double> f_new, g_new;
  std::size_t first_level = 0;
  if (warm.f.size() == n && warm.g.size() == m) {
    f = warm.f;
    g = warm.g;
    first_level = cfg_.epsilons.size() - 1;
  }
  double err = std::numeric_limits<double>::infinity();
  for (std::size_t level = first_level; level < cfg_.epsilons.size(); ++level) {
    const double eps = cfg_.epsilons[level];
    const bool last = level + 1 == cfg_.epsilons.size();
    const double tol = last ? cfg_.tolerance : std::max(cfg_.tolerance, 1e-3);
    for (int it = 0; it < cfg_.max_iterations; ++it) {
      softmin(src, tgt, g, eps, f_new);
      err = row_error(source.weights, f, f_new, eps);
      const double w = err < kRelaxFrom ? cfg_.relaxation : 1.0;
      if (w == 1.0) {
        f.swap(f_new);
        softmin(tgt, src, f, eps, g);
      } else {
        for (std::size_t i = 0; i < n; ++i) f[i] += w * (f_new[i] - f[i]);
        softmin(tgt, src, f, eps, g_new);
        for (std::size_t j = 0; j < m; ++j) g[j] += w * (g_new[j] - g[j]);
      }
      if (record) history_.push_back(err);
      ++r.iterations;
      if (err < tol) break;
    }
  }
  // A plain column update leaves the target marginal exact.
  if (cfg_.relaxation != 1.0) softmin(tgt, src, f, cfg_.epsilons.back(), g);
  warm = {f, g};
  r.error = err;
  r.value = weighted(source.weights, f) + weighted(target.weights, g);
  return r;
}

// OT(a, a) has a symmetric optimum f = g. Alternating updates crawl there
// when the plan is close to the identity; the averaged update
// f <- (f + softmin(f)) / 2 contracts quickly in that regime.
SinkhornSolver::Iterate SinkhornSolver::iterate_self(const ParticleDensity& source,
                                                     std::vector<double>& warm) {
  const Cloud src(source);
  const std::size_t n = src.size();
  Iterate r;
  std::vector<double>& f = r.f;
  f.assign(n, 0.0);
  std::vector<double> f_new;
  std::size_t first_level = 0;
  if (warm.size() == n) {
    f = warm;
    first_level = cfg_.epsilons.size() - 1;
  }
  double err = std::numeric_limits<double>::infinity();
  for (std::size_t level = first_level; level < cfg_.epsilons.size(); ++level) {
    const double eps = cfg_.epsilons[level];
    const bool last = level + 1 == cfg_.epsilons.size();
    const double tol = last ? cfg_.tolerance : std::max(cfg_.tolerance, 1e-3);
    for (int it = 0; it < cfg_.max_iterations; ++it) {
      softmin(src, src, f, eps, f_new);
      err = row_error(source.weights, f, f_new, eps);
      ++r.iterations;
      if (err < tol) break;
      for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * (f[i] + f_new[i]);
    }
  }
  warm = f;
  r.g = f;
  r.error = err;
  r.value = 2.0 * weighted(source.weights, f);
  return r;
}

TransportResult SinkhornSolver::solve(const ParticleDensity& source,
                                      const ParticleDensity& target) {
  if (source.size() == 0 || target.size() == 0)
    throw std::invalid_argument("w2_sinkhorn: empty cloud");
  history_.clear();
  const double eps = cfg_.epsilons.back();
  // Identical clouds are a self problem; the debiased cost is then exactly 0.
  const bool same = source.positions == target.positions && source.weights == target.weights;
  std::optional<Iterate> aa, bb;
  if (same || cfg_.debias) aa = iterate_self(source, warm_source_);
  if (cfg_.debias) bb = same ? aa : iterate_self(target, warm_target_);
  Iterate main = same ? *aa : iterate(source, target, warm_, true);

  TransportResult r;
  r.method = OtMethod::sinkhorn;
  r.rows = source.size();
  r.cols = target.size();
  r.iterations = main.iterations;
  r.marginal_error = main.error;
  r.entropic_cost = main.value;
  Assembled as = assemble(Cloud(source), Cloud(target), main.f, main.g, eps);
  r.map = std::move(as.map);
  r.cost = as.cost;
  if (cfg_.store_plan) r.coupling = std::move(as.plan);
  r.source_potential = std::move(main.f);
  r.target_potential = std::move(main.g);

  if (cfg_.debias) {
    r.debiased_cost = *r.entropic_cost - 0.5 * (aa->value + bb->value);
    r.source_self_map = same ? r.map : assemble(Cloud(source), Cloud(source), aa->f, aa->g, eps).map;
    r.marginal_error = std::max({main.error, aa->error, bb->error});
  }
  r.converged = r.marginal_error < cfg_.tolerance;
  return r;
}

TransportResult w2_sinkhorn(const Density& source, const Density& target,
                            const SinkhornConfig& cfg) {
  const auto as_cloud = [](const Density& d) {
    if (const auto* g = std::get_if<GridDensity>(&d)) return to_particles(*g);
    return std::get<ParticleDensity>(d);
  };
  SinkhornSolver solver(cfg);
  TransportResult r = solver.solve(as_cloud(source), as_cloud(target));
  if (!r.converged) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "w2_sinkhorn: marginal error %.3e above tolerance %.1e after %d iterations",
                  r.marginal_error, cfg.tolerance, r.iterations);
    throw TransportError(msg, r.marginal_error);
  }
  return r;
}

double wass_distance(const Density& a, const Density& b, OtMethod method,
                     const SinkhornConfig& cfg) {
  double c = 0.0;
  if (method == OtMethod::exact) {
    const auto* pa = std::get_if<ParticleDensity>(&a);
    const auto* pb = std::get_if<ParticleDensity>(&b);
    if (!pa || !pb) throw std::invalid_argument("wass_distance: exact method needs particle clouds");
    c = w2_exact_small(*pa, *pb).cost;
  } else {
    c = w2_sinkhorn(a, b, cfg).reported_cost();
  }
  return std::sqrt(std::max(c, 0.0));
}

}  // namespace denslab
