#include "blockstab/dual_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockstab {

std::vector<std::size_t> BlockDecomposition::block_of(int num_nodes) const {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(num_nodes, kUnset);
  for (std::size_t b = 0; b < size(); ++b) {
    for (NodeId u : block(b)) {
      if (u < 0 || u >= num_nodes) throw ModelError("decomposition node out of range");
      if (owner[u] != kUnset) throw ModelError("decomposition blocks overlap");
      owner[u] = b;
    }
  }
  for (std::size_t u = 0; u < owner.size(); ++u)
    if (owner[u] == kUnset) throw ModelError("decomposition does not cover every node");
  return owner;
}

void BlockDecomposition::validate(int num_nodes) {
  block_of(num_nodes);
  if (status.size() > size()) throw ModelError("more statuses than blocks");
  status.resize(size(), BlockStatus::kUntested);
}

BlockDecomposition single_block(int num_nodes) {
  BlockDecomposition d;
  d.blocks.push_back(NodeSet::range(num_nodes));
  d.validate(num_nodes);
  return d;
}

BlockDecomposition singleton_blocks(int num_nodes) {
  BlockDecomposition d;
  for (NodeId u = 0; u < num_nodes; ++u) d.blocks.push_back(NodeSet({u}));
  d.validate(num_nodes);
  return d;
}

std::vector<std::size_t> boundary_edges(const PottsInstance& inst, const BlockDecomposition& decomp) {
  const std::vector<std::size_t> owner = decomp.block_of(inst.num_nodes());
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    if (owner[inst.edge(e).u] != owner[inst.edge(e).v]) out.push_back(e);
  return out;
}

double edge_dual_term(double weight, std::span<const double> a, std::span<const double> b) {
  // min over i != j of (w - a_i - b_j) uses the two largest entries of b.
  const std::size_t k = a.size();
  std::size_t top = 0;
  for (std::size_t j = 1; j < k; ++j)
    if (b[j] > b[top]) top = j;
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j)
    if (j != top) second = std::max(second, b[j]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    best = std::min(best, -a[i] - b[i]);
    const double other = i == top ? second : b[top];
    if (k > 1) best = std::min(best, weight - a[i] - other);
  }
  return best;
}

namespace {

double node_term(const PottsInstance& inst, NodeId u, const std::vector<double>& shift) {
  double best = std::numeric_limits<double>::infinity();
  for (Label i = 0; i < inst.num_labels(); ++i) {
    const double c = inst.cost(u, i);
    if (is_forbidden(c)) continue;
    best = std::min(best, c + shift[i]);
  }
  return best;
}

}  // namespace

double pairwise_dual_value(const PottsInstance& inst, const DualSolution& eta) {
  if (eta.num_edges() != inst.num_edges() || (eta.num_labels() != inst.num_labels() && inst.num_edges() > 0))
    throw DualError("dual is not keyed on the instance");
  const int k = inst.num_labels();
  double total = 0.0;
  std::vector<double> shift(k);
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    std::fill(shift.begin(), shift.end(), 0.0);
    for (const Incidence& inc : inst.incident(u)) {
      auto msg = eta.message(inc.edge, side_of(inst.edge(inc.edge), u));
      for (Label i = 0; i < k; ++i) shift[i] += msg[i];
    }
    total += node_term(inst, u, shift);
  }
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    total += edge_dual_term(inst.edge(e).weight, eta.message(e, Side::kFromU), eta.message(e, Side::kFromV));
  return total;
}

DualSolution balance_dual(const PottsInstance& inst, DualSolution eta, int sweeps, double tol) {
  if (eta.num_edges() != inst.num_edges() || (eta.num_labels() != inst.num_labels() && inst.num_edges() > 0))
    throw DualError("dual is not keyed on the instance");
  const int k = inst.num_labels();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> belief(static_cast<std::size_t>(inst.num_nodes()) * k);
  auto b = [&](NodeId u) { return std::span<double>(belief).subspan(static_cast<std::size_t>(u) * k, k); };
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    auto bu = b(u);
    for (Label i = 0; i < k; ++i) bu[i] = is_forbidden(inst.cost(u, i)) ? inf : inst.cost(u, i);
    for (const Incidence& inc : inst.incident(u)) {
      auto msg = eta.message(inc.edge, side_of(inst.edge(inc.edge), u));
      for (Label i = 0; i < k; ++i) bu[i] += msg[i];
    }
  }
  const double threshold = tol * objective_scale(inst);
  std::vector<double> own_u(k), own_v(k);

  // New message into one endpoint: half the gap between the min-marginal
  // through the edge and the endpoint's belief without the edge. Forbidden
  // labels get a message low enough never to attain the edge minimum.
  auto update = [&](std::span<const double> self, std::span<const double> other, double w, std::span<double> msg) {
    double other_min = inf;
    for (double x : other) other_min = std::min(other_min, x);
    double lowest = inf;
    for (Label i = 0; i < k; ++i) {
      if (self[i] == inf) continue;
      const double through = std::min(other[i], other_min + w);
      msg[i] = 0.5 * (through - self[i]);
      lowest = std::min(lowest, msg[i]);
    }
    for (Label i = 0; i < k; ++i)
      if (self[i] == inf) msg[i] = lowest - w;
  };

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
      const Edge& edge = inst.edge(e);
      auto mu = eta.message(e, Side::kFromU);
      auto mv = eta.message(e, Side::kFromV);
      auto bu = b(edge.u);
      auto bv = b(edge.v);
      for (Label i = 0; i < k; ++i) {
        own_u[i] = bu[i] == inf ? inf : bu[i] - mu[i];
        own_v[i] = bv[i] == inf ? inf : bv[i] - mv[i];
      }
      const std::vector<double> old_u(mu.begin(), mu.end()), old_v(mv.begin(), mv.end());
      update(own_u, own_v, edge.weight, mu);
      update(own_v, own_u, edge.weight, mv);
      for (Label i = 0; i < k; ++i) {
        if (own_u[i] != inf) {
          bu[i] = own_u[i] + mu[i];
          moved = std::max(moved, std::abs(mu[i] - old_u[i]));
        }
        if (own_v[i] != inf) {
          bv[i] = own_v[i] + mv[i];
          moved = std::max(moved, std::abs(mv[i] - old_v[i]));
        }
      }
    }
    if (moved <= threshold) break;
  }
  return eta;
}

namespace {

void require_boundary_keys(const PottsInstance& inst, const BlockDecomposition& decomp,
                           const BlockDualSolution& delta) {
  if (delta.edges() != boundary_edges(inst, decomp))
    throw DualError("block dual must be keyed exactly on the boundary edges");
  if (!delta.edges().empty() && delta.num_labels() != inst.num_labels())
    throw DualError("block dual label count does not match the instance");
}

}  // namespace

std::vector<BlockSubproblem> solve_block_subproblems(const PottsInstance& inst, const BlockDecomposition& decomp,
                                                     const BlockDualSolution& delta, const LpOptions& options) {
  require_boundary_keys(inst, decomp, delta);
  std::vector<BlockSubproblem> out(decomp.size());
  for (std::size_t b = 0; b < decomp.size(); ++b) {
    const NodeSet& block = decomp.block(b);
    if (block.empty()) continue;
    out[b].restricted = restricted_instance(inst, block, delta);
    out[b].lp = solve_lp(out[b].restricted.instance, options);
  }
  return out;
}

BlockDualValue block_dual_value(const PottsInstance& inst, const BlockDecomposition& decomp,
                                const BlockDualSolution& delta, const LpOptions& options) {
  const std::vector<BlockSubproblem> subs = solve_block_subproblems(inst, decomp, delta, options);
  BlockDualValue out;
  out.block_values.assign(decomp.size(), 0.0);
  for (std::size_t b = 0; b < subs.size(); ++b)
    if (subs[b].lp) out.block_values[b] = subs[b].lp->primal.objective;
  for (std::size_t e : delta.edges())
    out.boundary_term +=
        edge_dual_term(inst.edge(e).weight, delta.message(e, Side::kFromU), delta.message(e, Side::kFromV));
  out.total = out.boundary_term;
  for (double v : out.block_values) out.total += v;
  return out;
}

CertifiedDual CertifiedDual::certify(const PottsInstance& inst, DualSolution eta, double lp_objective, double tol) {
  const double value = pairwise_dual_value(inst, eta);
  const double gap = std::abs(value - lp_objective);
  if (!(gap <= tol * std::max(1.0, std::abs(lp_objective))))
    throw DualError("dual point is not optimal: gap " + std::to_string(gap));
  return CertifiedDual(std::move(eta), value, gap);
}

BlockDualSolution restrict_dual(const PottsInstance& inst, const CertifiedDual& eta, const BlockDecomposition& decomp) {
  const DualSolution& full = eta.dual();
  if (full.num_edges() != inst.num_edges()) throw DualError("dual is not keyed on the instance");
  BlockDualSolution delta(inst.num_labels(), boundary_edges(inst, decomp));
  for (std::size_t e : delta.edges()) {
    for (Side side : {Side::kFromU, Side::kFromV}) {
      auto src = full.message(e, side);
      auto dst = delta.message(e, side);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return delta;
}

DualSolution extend_dual(const PottsInstance& inst, const BlockDecomposition& decomp, const BlockDualSolution& delta,
                         std::span<const DualSolution> block_duals) {
  require_boundary_keys(inst, decomp, delta);
  if (block_duals.size() != decomp.size()) throw DualError("one block dual per block required");
  DualSolution out(inst.num_edges(), inst.num_labels());
  for (std::size_t e : delta.edges()) {
    for (Side side : {Side::kFromU, Side::kFromV}) {
      auto src = delta.message(e, side);
      std::copy(src.begin(), src.end(), out.message(e, side).begin());
    }
  }
  for (std::size_t b = 0; b < decomp.size(); ++b) {
    const std::vector<std::size_t> local = internal_edges(inst, decomp.block(b));
    const DualSolution& eta_b = block_duals[b];
    if (eta_b.num_edges() != local.size() || (!local.empty() && eta_b.num_labels() != inst.num_labels()))
      throw DualError("block dual does not match the block's internal edges");
    // Local node ids keep the parent order, so edge orientation is preserved.
    for (std::size_t l = 0; l < local.size(); ++l) {
      for (Side side : {Side::kFromU, Side::kFromV}) {
        auto src = eta_b.message(l, side);
        std::copy(src.begin(), src.end(), out.message(local[l], side).begin());
      }
    }
  }
  return out;
}

std::optional<Label> local_decode(const PottsInstance& inst, const DualSolution& eta, NodeId u, double tol) {
  if (u < 0 || u >= inst.num_nodes()) throw ModelError("node out of range");
  const int k = inst.num_labels();
  std::vector<double> cost(inst.costs(u).begin(), inst.costs(u).end());
  for (const Incidence& inc : inst.incident(u)) {
    auto msg = eta.message(inc.edge, side_of(inst.edge(inc.edge), u));
    for (Label i = 0; i < k; ++i) cost[i] += msg[i];
  }
  Label best = -1;
  for (Label i = 0; i < k; ++i)
    if (!is_forbidden(cost[i]) && (best < 0 || cost[i] < cost[best])) best = i;
  if (best < 0) return std::nullopt;
  for (Label i = 0; i < k; ++i)
    if (i != best && !is_forbidden(cost[i]) && cost[i] - cost[best] <= tol) return std::nullopt;
  return best;
}

NodeLabelTable epsilon_star(const PottsInstance& inst, const BlockDualSolution& delta, const NodeSet& block) {
  const Boundary bd = boundary(inst, block);
  const int k = inst.num_labels();
  NodeLabelTable out;
  for (NodeId u : bd.nodes) out[u].assign(k, 0.0);
  for (std::size_t e : bd.edges) {
    const Edge& edge = inst.edge(e);
    const NodeId u = block.contains(edge.u) ? edge.u : edge.v;
    auto msg = delta.message(e, side_of(edge, u));
    for (Label i = 0; i < k; ++i) out[u][i] += msg[i];
  }
  return out;
}

}  // namespace blockstab
