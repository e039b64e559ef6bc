#include "blockstab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockstab::oracle {

namespace {

// Deliberately simple re-implementations: nothing here reuses solver code.

void require_small(const PottsInstance& inst, std::uint64_t limit) {
  double count = std::pow(static_cast<double>(inst.num_labels()), inst.num_nodes());
  if (count > static_cast<double>(limit)) throw TooLarge("too many labelings to enumerate");
}

double energy(const PottsInstance& inst, std::span<const double> weights, const std::vector<Label>& f) {
  double total = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    const double c = inst.cost(u, f[u]);
    if (c == std::numeric_limits<double>::infinity()) return c;
    total += c;
  }
  for (std::size_t e = 0; e < weights.size(); ++e)
    if (f[inst.edge(e).u] != f[inst.edge(e).v]) total += weights[e];
  return total;
}

mpq_class exact_energy(const PottsInstance& inst, std::span<const double> weights, const std::vector<Label>& f) {
  mpq_class total = 0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) total += mpq_class(inst.cost(u, f[u]));
  for (std::size_t e = 0; e < weights.size(); ++e)
    if (f[inst.edge(e).u] != f[inst.edge(e).v]) total += mpq_class(weights[e]);
  return total;
}

double scale(const PottsInstance& inst, std::span<const double> weights) {
  double s = 1.0;
  for (double c : inst.all_costs())
    if (std::isfinite(c)) s += std::abs(c);
  for (double w : weights) s += w;
  return s;
}

// -1, 0, +1 for a < b, a == b, a > b.
int compare_energy(const PottsInstance& inst, std::span<const double> weights, const std::vector<Label>& a, double qa,
                   const std::vector<Label>& b, double qb, double window, Arithmetic arithmetic) {
  const bool inf_a = std::isinf(qa), inf_b = std::isinf(qb);
  if (inf_a || inf_b) return inf_a == inf_b ? 0 : (inf_a ? 1 : -1);
  if (std::abs(qa - qb) > window) return qa < qb ? -1 : 1;
  if (arithmetic == Arithmetic::kFloat) return 0;
  return cmp(exact_energy(inst, weights, a), exact_energy(inst, weights, b));
}

// Row-major enumeration (last node fastest). Energies are kept per prefix of
// the node order, so each step only recomputes the nodes that changed.
class Enumerator {
 public:
  Enumerator(const PottsInstance& inst, std::span<const double> weights)
      : inst_(inst), k_(inst.num_labels()), f_(inst.num_nodes(), 0), lower_(inst.num_nodes()),
        prefix_(inst.num_nodes() + 1, 0.0) {
    for (std::size_t e = 0; e < weights.size(); ++e) lower_[inst.edge(e).v].push_back({inst.edge(e).u, weights[e]});
    refresh(0);
  }

  const std::vector<Label>& labels() const { return f_; }
  double energy() const { return prefix_.back(); }

  bool next() {
    int u = static_cast<int>(f_.size()) - 1;
    while (u >= 0 && f_[u] == k_ - 1) f_[u--] = 0;
    if (u < 0) return false;
    ++f_[u];
    refresh(u);
    return true;
  }

 private:
  struct Lower {
    NodeId node;
    double weight;
  };

  void refresh(int from) {
    for (std::size_t u = from; u < f_.size(); ++u) {
      double q = prefix_[u] + inst_.cost(static_cast<NodeId>(u), f_[u]);
      for (const Lower& l : lower_[u])
        if (f_[l.node] != f_[u]) q += l.weight;
      prefix_[u + 1] = q;
    }
  }

  const PottsInstance& inst_;
  int k_;
  std::vector<Label> f_;
  std::vector<std::vector<Lower>> lower_;
  std::vector<double> prefix_;
};

}  // namespace

MapValue enumerate_map(const PottsInstance& inst, Arithmetic arithmetic, std::uint64_t limit) {
  require_small(inst, limit);
  const std::vector<double> weights = inst.weights();
  const double window = 1e-7 * scale(inst, weights);
  Enumerator it(inst, weights);
  std::vector<Label> best = it.labels();
  double best_value = energy(inst, weights, best);
  while (it.next()) {
    const std::vector<Label>& f = it.labels();
    const double q = it.energy();
    if (compare_energy(inst, weights, f, q, best, best_value, window, arithmetic) < 0) {
      best = f;
      best_value = q;
    }
  }
  return {Labeling(best), best_value};
}

StabilityVerdict enumerate_stability(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                                     Arithmetic arithmetic, std::uint64_t limit) {
  require_small(inst, limit);
  if (g.size() != static_cast<std::size_t>(inst.num_nodes())) throw ModelError("labeling size mismatch");
  const std::vector<double> weights = inst.weights();
  std::vector<double> star = weights;
  for (std::size_t e = 0; e < star.size(); ++e) {
    if (star[e] == 0.0) continue;
    if (g[inst.edge(e).u] != g[inst.edge(e).v]) {
      if (std::isinf(gamma)) throw ModelError("infinite gamma with a cut edge");
      star[e] *= gamma;
    } else {
      star[e] = std::isinf(beta) ? 0.0 : star[e] / beta;
    }
  }
  const double window = 1e-7 * scale(inst, star);
  const std::vector<Label> ref(g.begin(), g.end());
  const double q_ref = energy(inst, star, ref);

  Enumerator it(inst, star);
  std::vector<Label> best;
  std::size_t best_distance = 0;
  do {
    const std::vector<Label>& f = it.labels();
    std::size_t d = 0;
    for (std::size_t u = 0; u < f.size(); ++u) d += f[u] != ref[u] ? 1 : 0;
    if (d <= best_distance) continue;
    const double q = it.energy();
    if (compare_energy(inst, star, f, q, ref, q_ref, window, arithmetic) <= 0) {
      best = f;
      best_distance = d;
    }
  } while (it.next());

  StabilityVerdict v;
  v.stable = best_distance == 0;
  v.hamming = best_distance;
  if (!v.stable) {
    v.witness = Labeling(best);
    v.margin = q_ref - energy(inst, star, best);
    const double orig_window = 1e-7 * scale(inst, weights);
    v.reference_suboptimal = compare_energy(inst, weights, best, energy(inst, weights, best), ref,
                                            energy(inst, weights, ref), orig_window, arithmetic) < 0;
  }
  return v;
}

CertificateReport verify_lp_certificate(const PottsInstance& inst, const PrimalSolution& x, const DualSolution& eta,
                                        double tol) {
  CertificateReport r;
  const int k = inst.num_labels();
  if (x.num_nodes != inst.num_nodes() || x.num_labels != k || x.num_edges != inst.num_edges()) {
    r.violations.push_back("primal shape does not match the instance");
    return r;
  }
  if (eta.num_edges() != inst.num_edges()) {
    r.violations.push_back("dual shape does not match the instance");
    return r;
  }
  r.min_entry = std::numeric_limits<double>::infinity();
  for (double v : x.node_marginals) r.min_entry = std::min(r.min_entry, v);
  for (double v : x.edge_marginals) r.min_entry = std::min(r.min_entry, v);
  if (x.node_marginals.empty()) r.min_entry = 0.0;

  double primal = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    double sum = 0.0;
    for (Label i = 0; i < k; ++i) {
      sum += x.x(u, i);
      const double c = inst.cost(u, i);
      if (std::isinf(c)) {
        if (x.x(u, i) > tol) r.violations.push_back("mass on a forbidden label at node " + std::to_string(u));
      } else {
        primal += c * x.x(u, i);
      }
    }
    r.max_normalization_residual = std::max(r.max_normalization_residual, std::abs(sum - 1.0));
  }
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const Edge& edge = inst.edge(e);
    for (Label i = 0; i < k; ++i) {
      double row = 0.0, col = 0.0;
      for (Label j = 0; j < k; ++j) {
        row += x.mu(e, i, j);
        col += x.mu(e, j, i);
        if (i != j) primal += edge.weight * x.mu(e, i, j);
      }
      r.max_marginalization_residual = std::max(r.max_marginalization_residual, std::abs(row - x.x(edge.u, i)));
      r.max_marginalization_residual = std::max(r.max_marginalization_residual, std::abs(col - x.x(edge.v, i)));
    }
  }
  r.primal_value = primal;

  // P(eta) evaluated by brute force over label pairs.
  double dual = 0.0;
  std::vector<std::vector<double>> node_cost(inst.num_nodes());
  for (NodeId u = 0; u < inst.num_nodes(); ++u) node_cost[u].assign(inst.costs(u).begin(), inst.costs(u).end());
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    const Edge& edge = inst.edge(e);
    auto a = eta.message(e, Side::kFromU);
    auto b = eta.message(e, Side::kFromV);
    double m = std::numeric_limits<double>::infinity();
    for (Label i = 0; i < k; ++i) {
      node_cost[edge.u][i] += a[i];
      node_cost[edge.v][i] += b[i];
      for (Label j = 0; j < k; ++j) m = std::min(m, (i != j ? edge.weight : 0.0) - a[i] - b[j]);
    }
    dual += m;
  }
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    const auto& c = node_cost[u];
    dual += *std::min_element(c.begin(), c.end());
    // Decoding: a unique minimizer with margin > tol must carry all the mass.
    const auto best = std::min_element(c.begin(), c.end()) - c.begin();
    bool unique = true;
    for (Label i = 0; i < k; ++i)
      if (i != best && c[i] - c[best] <= tol) unique = false;
    if (unique && std::isfinite(c[best]) && x.x(u, static_cast<Label>(best)) < 1.0 - tol)
      r.decoding_violations.push_back(u);
  }
  r.dual_value = dual;
  r.gap = std::abs(primal - dual);

  if (r.max_normalization_residual > tol) r.violations.push_back("normalization residual above tolerance");
  if (r.max_marginalization_residual > tol) r.violations.push_back("marginalization residual above tolerance");
  if (r.min_entry < -tol) r.violations.push_back("negative marginal");
  if (!(r.gap <= tol)) r.violations.push_back("duality gap above tolerance");
  if (!r.decoding_violations.empty()) r.violations.push_back("decodable node without integral marginal");
  return r;
}

}  // namespace blockstab::oracle
