#pragma once

// Reference computations written directly from the definitions, sharing no
// code with the library's solvers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "blockstab/builders.hpp"
#include "blockstab/duals.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/model.hpp"

namespace ref {

using blockstab::Label;
using blockstab::Labeling;
using blockstab::NodeId;
using blockstab::PottsInstance;

inline Labeling lab(std::vector<Label> v) { return Labeling(std::move(v)); }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double energy(const PottsInstance& inst, const std::vector<double>& w, const std::vector<Label>& f) {
  double q = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) q += inst.cost(u, f[u]);
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    if (f[inst.edge(e).u] != f[inst.edge(e).v]) q += w[e];
  return q;
}

inline double energy(const PottsInstance& inst, const Labeling& f) {
  return energy(inst, inst.weights(), std::vector<Label>(f.begin(), f.end()));
}

inline mpq_class exact_energy(const PottsInstance& inst, const std::vector<double>& w, const std::vector<Label>& f) {
  mpq_class q = 0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) q += mpq_class(inst.cost(u, f[u]));
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    if (f[inst.edge(e).u] != f[inst.edge(e).v]) q += mpq_class(w[e]);
  return q;
}

/// Calls visit(f) for every assignment in row-major order (last node fastest).
template <class Visit>
void for_each_labeling(int n, int k, Visit visit) {
  std::vector<Label> f(n, 0);
  while (true) {
    visit(f);
    int u = n - 1;
    while (u >= 0 && f[u] == k - 1) f[u--] = 0;
    if (u < 0) return;
    ++f[u];
  }
}

/// First minimizer in row-major order. Instances must have finite costs.
inline std::pair<Labeling, double> brute_map(const PottsInstance& inst) {
  const auto w = inst.weights();
  std::vector<Label> best;
  double best_q = kInf;
  for_each_labeling(inst.num_nodes(), inst.num_labels(), [&](const std::vector<Label>& f) {
    const double q = energy(inst, w, f);
    if (q < best_q - 1e-12) {
      best_q = q;
      best = f;
    }
  });
  return {Labeling(best), best_q};
}

/// Number of minimizers within a relative window.
inline int count_minimizers(const PottsInstance& inst, double best) {
  const auto w = inst.weights();
  int count = 0;
  for_each_labeling(inst.num_nodes(), inst.num_labels(), [&](const std::vector<Label>& f) {
    if (std::abs(energy(inst, w, f) - best) <= 1e-9 * (1.0 + std::abs(best))) ++count;
  });
  return count;
}

/// (beta, gamma)-stability by enumeration under the worst-case weights,
/// compared exactly. Returns the largest Hamming distance of a labeling
/// whose perturbed energy does not exceed that of g.
inline std::size_t brute_max_hamming(const PottsInstance& inst, const Labeling& g, double beta, double gamma) {
  std::vector<double> w = inst.weights();
  for (std::size_t e = 0; e < w.size(); ++e) {
    const bool cut = g[inst.edge(e).u] != g[inst.edge(e).v];
    w[e] = cut ? gamma * w[e] : w[e] / beta;
  }
  const std::vector<Label> gv(g.begin(), g.end());
  const mpq_class qg = exact_energy(inst, w, gv);
  std::size_t best = 0;
  for_each_labeling(inst.num_nodes(), inst.num_labels(), [&](const std::vector<Label>& f) {
    std::size_t d = 0;
    for (std::size_t u = 0; u < f.size(); ++u) d += f[u] != gv[u];
    if (d <= best) return;
    for (NodeId u = 0; u < inst.num_nodes(); ++u)
      if (std::isinf(inst.cost(u, f[u]))) return;
    if (exact_energy(inst, w, f) <= qg) best = d;
  });
  return best;
}

/// P(eta) from its definition; forbidden labels are left out of node minima.
inline double dual_value(const PottsInstance& inst, const blockstab::DualSolution& eta) {
  const int k = inst.num_labels();
  std::vector<double> theta(inst.all_costs().begin(), inst.all_costs().end());
  double p = 0.0;
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const auto& edge = inst.edge(e);
    const auto a = eta.message(e, blockstab::Side::kFromU);
    const auto b = eta.message(e, blockstab::Side::kFromV);
    double m = kInf;
    for (Label i = 0; i < k; ++i) {
      theta[edge.u * k + i] += a[i];
      theta[edge.v * k + i] += b[i];
      for (Label j = 0; j < k; ++j) m = std::min(m, (i != j ? edge.weight : 0.0) - a[i] - b[j]);
    }
    p += m;
  }
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    double m = kInf;
    for (Label i = 0; i < k; ++i)
      if (!std::isinf(inst.cost(u, i))) m = std::min(m, theta[u * k + i]);
    p += m;
  }
  return p;
}

/// Largest violation of the local-polytope constraints.
inline double polytope_residual(const PottsInstance& inst, const blockstab::PrimalSolution& x) {
  const int k = inst.num_labels();
  double r = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    double s = 0.0;
    for (Label i = 0; i < k; ++i) {
      s += x.x(u, i);
      r = std::max(r, -x.x(u, i));
    }
    r = std::max(r, std::abs(s - 1.0));
  }
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const auto& edge = inst.edge(e);
    for (Label i = 0; i < k; ++i) {
      double row = 0.0, col = 0.0;
      for (Label j = 0; j < k; ++j) {
        row += x.mu(e, i, j);
        col += x.mu(e, j, i);
        r = std::max(r, -x.mu(e, i, j));
      }
      r = std::max(r, std::abs(row - x.x(edge.u, i)));
      r = std::max(r, std::abs(col - x.x(edge.v, i)));
    }
  }
  return r;
}

/// Sum of theta x + w [i != j] mu.
inline double primal_value(const PottsInstance& inst, const blockstab::PrimalSolution& x) {
  double v = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u)
    for (Label i = 0; i < inst.num_labels(); ++i)
      if (x.x(u, i) != 0.0) v += inst.cost(u, i) * x.x(u, i);
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    for (Label i = 0; i < inst.num_labels(); ++i)
      for (Label j = 0; j < inst.num_labels(); ++j)
        if (i != j) v += inst.edge(e).weight * x.mu(e, i, j);
  return v;
}

inline blockstab::RandomSpec grid_spec(std::uint64_t seed, int k = 3) {
  blockstab::RandomSpec s;
  s.num_labels = k;
  s.costs = {0.0, 5.0};
  s.weights = {0.0, 3.0};
  s.integer = true;
  s.seed = seed;
  return s;
}

}  // namespace ref
