// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "denslab/transport/transport.hpp"

namespace denslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> cost_matrix(const ParticleDensity& s, const ParticleDensity& t) {
  std::vector<double> c(s.size() * t.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      c[i * t.size() + j] = norm2(s.positions[i] - t.positions[j]);
  return c;
}

bool equal_weights(const ParticleDensity& p) {
  const double w0 = p.weights.front();
  return std::all_of(p.weights.begin(), p.weights.end(),
                     [w0](double w) { return std::abs(w - w0) <= 1e-12 * w0; });
}

// Shortest augmenting path assignment on a square cost matrix. Returns the
// column assigned to each row and fills the row/column potentials.
std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t n,
                                  std::vector<double>& u_out, std::vector<double>& v_out) {
  // 1-based arrays; column 0 is the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = static_cast<int>(j - 1);
  u_out.assign(u.begin() + 1, u.end());
  v_out.assign(v.begin() + 1, v.end());
  return col_of_row;
}

// Successive shortest paths on the bipartite transportation network with
// real-valued supplies. Node potentials keep reduced costs nonnegative, so
// they double as Kantorovich potentials at termination.
std::vector<double> solve_transportation(const std::vector<double>& cost,
                                         const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         std::vector<double>& phi,
                                         std::vector<double>& psi) {
  const std::size_t n = a.size(), m = b.size(), nodes = n + m;
  std::vector<double> flow(n * m, 0.0);
  std::vector<double> supply(a), demand(b);
  std::vector<double> pot(nodes, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double mn = kInf;
    for (std::size_t i = 0; i < n; ++i) mn = std::min(mn, cost[i * m + j]);
    pot[n + j] = mn;
  }
  const double eps_mass = 1e-15;
  std::vector<double> dist(nodes);
  std::vector<std::ptrdiff_t> pred(nodes);
  std::vector<char> done(nodes);

  for (int guard = 0; guard < 100000; ++guard) {
    bool any = false;
    for (double s : supply) any = any || s > eps_mass;
    if (!any) break;

    // Dense Dijkstra from every source with remaining supply.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > eps_mass) dist[i] = 0.0;
    for (std::size_t it = 0; it < nodes; ++it) {
      std::size_t u = nodes;
      for (std::size_t k = 0; k < nodes; ++k)
        if (!done[k] && dist[k] < kInf && (u == nodes || dist[k] < dist[u])) u = k;
      if (u == nodes) break;
      done[u] = 1;
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const double rc = cost[u * m + j] + pot[u] - pot[n + j];
          const double nd = dist[u] + std::max(rc, 0.0);
          if (nd < dist[n + j]) {
            dist[n + j] = nd;
            pred[n + j] = static_cast<std::ptrdiff_t>(u);
          }
        }
      } else {
        const std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (flow[i * m + j] <= 0.0) continue;
          const double rc = -cost[i * m + j] + pot[u] - pot[i];
          const double nd = dist[u] + std::max(rc, 0.0);
          if (nd < dist[i]) {
            dist[i] = nd;
            pred[i] = static_cast<std::ptrdiff_t>(u);
          }
        }
      }
    }
    std::size_t sink = nodes;
    for (std::size_t j = 0; j < m; ++j)
      if (demand[j] > eps_mass && dist[n + j] < kInf &&
          (sink == nodes || dist[n + j] < dist[sink]))
        sink = n + j;
    if (sink == nodes) throw std::runtime_error("w2_exact_small: infeasible transport problem");
    const double dt = dist[sink];
    for (std::size_t k = 0; k < nodes; ++k) pot[k] += std::min(dist[k], dt);

    // Bottleneck along the path.
    double push = demand[sink - n];
    std::size_t v = sink;
    while (pred[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(pred[v]);
      if (u >= n) push = std::min(push, flow[v * m + (u - n)]);
      v = u;
    }
    push = std::min(push, supply[v]);
    demand[sink - n] -= push;
    supply[v] -= push;
    v = sink;
    while (pred[v] >= 0) {
      const std::size_t u = static_cast<std::size_t>(pred[v]);
      if (u < n)
        flow[u * m + (v - n)] += push;
      else
        flow[v * m + (u - n)] -= push;
      v = u;
    }
  }
  phi.resize(n);
  psi.resize(m);
  for (std::size_t i = 0; i < n; ++i) phi[i] = -pot[i];
  for (std::size_t j = 0; j < m; ++j) psi[j] = pot[n + j];
  return flow;
}

}  // namespace

OtMethod parse_ot_method(const std::string& s) {
  if (s == "exact") return OtMethod::exact;
  if (s == "sinkhorn") return OtMethod::sinkhorn;
  throw std::invalid_argument("unknown OT method '" + s + "' (expected exact|sinkhorn)");
}

std::string to_string(OtMethod m) { return m == OtMethod::exact ? "exact" : "sinkhorn"; }

double TransportResult::plan(std::size_t i, std::size_t j) const {
  if (!coupling.empty()) return coupling[i * cols + j];
  if (!assignment.empty())
    return assignment[i] == static_cast<int>(j) ? 1.0 / static_cast<double>(rows) : 0.0;
  throw std::logic_error("TransportResult: no plan stored");
}

TransportResult w2_exact_small(const ParticleDensity& source, const ParticleDensity& target) {
  const std::size_t n = source.size(), m = target.size();
  if (n == 0 || m == 0) throw std::invalid_argument("w2_exact_small: empty cloud");
  if (n > kMaxExactPoints || m > kMaxExactPoints)
    throw std::invalid_argument("w2_exact_small: at most 64 points per cloud");
  if (std::abs(source.mass() - 1.0) > 1e-9 || std::abs(target.mass() - 1.0) > 1e-9)
    throw std::invalid_argument("w2_exact_small: weights must be normalised to unit mass");

  const std::vector<double> c = cost_matrix(source, target);
  TransportResult r;
  r.method = OtMethod::exact;
  r.rows = n;
  r.cols = m;
  if (n == m && equal_weights(source) && equal_weights(target)) {
    std::vector<double> u, v;
    r.assignment = solve_assignment(c, n, u, v);
    r.source_potential = std::move(u);
    r.target_potential = std::move(v);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i * n + r.assignment[i]];
    r.cost = s / static_cast<double>(n);
  } else {
    r.coupling = solve_transportation(c, source.weights, target.weights, r.source_potential,
                                      r.target_potential);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += r.coupling[k] * c[k];
    r.cost = s;
  }
  r.map = optimal_map(r, source, target);
  return r;
}

std::vector<Vec2> optimal_map(const TransportResult& result, const ParticleDensity& source,
                              const ParticleDensity& target) {
  if (result.rows != source.size() || result.cols != target.size())
    throw std::invalid_argument("optimal_map: result does not match the clouds");
  std::vector<Vec2> out(source.size());
  if (!result.assignment.empty()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = target.positions[result.assignment[i]];
    return out;
  }
  if (result.coupling.empty()) throw std::invalid_argument("optimal_map: no plan stored");
  for (std::size_t i = 0; i < out.size(); ++i) {
    Vec2 acc;
    double row = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double p = result.coupling[i * result.cols + j];
      acc += p * target.positions[j];
      row += p;
    }
    if (!(row > 0.0)) throw std::invalid_argument("optimal_map: degenerate plan row");
    out[i] = (1.0 / source.weights[i]) * acc;
  }
  return out;
}

}  // namespace denslab
