#include "blockstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "blockstab/duals.hpp"

namespace blockstab {

NodeSet::NodeSet(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

NodeSet NodeSet::range(NodeId count) {
  std::vector<NodeId> nodes(static_cast<std::size_t>(std::max<NodeId>(count, 0)));
  for (NodeId u = 0; u < count; ++u) nodes[u] = u;
  return NodeSet(std::move(nodes));
}

bool NodeSet::contains(NodeId u) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), u);
}

std::optional<std::size_t> NodeSet::index_of(NodeId u) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), u);
  if (it == nodes_.end() || *it != u) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet(std::move(out));
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet(std::move(out));
}

Labeling Labeling::restricted_to(const NodeSet& nodes) const {
  std::vector<Label> out;
  out.reserve(nodes.size());
  for (NodeId u : nodes) out.push_back(labels_.at(static_cast<std::size_t>(u)));
  return Labeling(std::move(out));
}

std::size_t hamming_distance(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size()) throw ModelError("labelings differ in length");
  std::size_t d = 0;
  for (std::size_t u = 0; u < a.size(); ++u) d += a[u] != b[u] ? 1 : 0;
  return d;
}

PottsInstance::PottsInstance(int num_nodes, int num_labels, std::vector<double> costs,
                             std::vector<Edge> edges)
    : num_nodes_(num_nodes), num_labels_(num_labels), costs_(std::move(costs)),
      edges_(std::move(edges)) {
  if (num_nodes < 0) throw ModelError("negative node count");
  if (num_labels < 1) throw ModelError("at least one label is required");
  if (costs_.size() != static_cast<std::size_t>(num_nodes) * static_cast<std::size_t>(num_labels))
    throw ModelError("cost table has the wrong size");

  for (NodeId u = 0; u < num_nodes_; ++u) {
    bool any_finite = false;
    for (double c : this->costs(u)) {
      if (std::isnan(c) || c == -kForbidden) throw ModelError("node costs must be finite or forbidden");
      any_finite = any_finite || !is_forbidden(c);
    }
    if (!any_finite) throw ModelError("node " + std::to_string(u) + " has no allowed label");
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (Edge& e : edges_) {
    if (e.u == e.v) throw ModelError("self loops are not allowed");
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes_ || e.v >= num_nodes_)
      throw ModelError("edge endpoint out of range");
    if (!(e.weight >= 0.0) || std::isinf(e.weight))
      throw ModelError("edge weights must be finite and nonnegative");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) throw ModelError("duplicate edge");
  }
  build_adjacency();
}

void PottsInstance::build_adjacency() {
  offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t u = 0; u < static_cast<std::size_t>(num_nodes_); ++u) offsets_[u + 1] += offsets_[u];
  adjacency_.assign(offsets_.back(), {});
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[fill[edges_[e].u]++] = {edges_[e].v, e};
    adjacency_[fill[edges_[e].v]++] = {edges_[e].u, e};
  }
}

std::vector<double> PottsInstance::weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const Edge& e : edges_) w.push_back(e.weight);
  return w;
}

std::optional<std::size_t> PottsInstance::find_edge(NodeId a, NodeId b) const {
  if (a < 0 || a >= num_nodes_) return std::nullopt;
  for (const Incidence& inc : incident(a))
    if (inc.neighbor == b) return inc.edge;
  return std::nullopt;
}

bool PottsInstance::has_forbidden() const {
  return std::any_of(costs_.begin(), costs_.end(), is_forbidden);
}

double PottsInstance::max_finite_magnitude() const {
  double m = 0.0;
  for (double c : costs_)
    if (!is_forbidden(c)) m = std::max(m, std::abs(c));
  for (const Edge& e : edges_) m = std::max(m, e.weight);
  return m;
}

PottsInstance PottsInstance::with_weights(std::vector<double> weights) const {
  if (weights.size() != edges_.size()) throw ModelError("weight vector has the wrong size");
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].weight = weights[e];
  return PottsInstance(num_nodes_, num_labels_, costs_, std::move(edges));
}

PottsInstance PottsInstance::with_costs(std::vector<double> costs) const {
  return PottsInstance(num_nodes_, num_labels_, std::move(costs), edges_);
}

void PottsInstance::validate_labeling(const Labeling& f) const {
  if (f.size() != static_cast<std::size_t>(num_nodes_))
    throw ModelError("labeling length does not match the instance");
  for (Label i : f)
    if (i < 0 || i >= num_labels_) throw ModelError("label out of range");
}

double objective(const PottsInstance& inst, const Labeling& f) {
  inst.validate_labeling(f);
  double q = 0.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    const double c = inst.cost(u, f[u]);
    if (is_forbidden(c)) return kForbidden;
    q += c;
  }
  for (const Edge& e : inst.edges())
    if (f[e.u] != f[e.v]) q += e.weight;
  return q;
}

double default_big(const PottsInstance& inst) {
  return std::max(1e6, 1e6 * inst.max_finite_magnitude());
}

PottsInstance with_finite_costs(const PottsInstance& inst, double big) {
  if (!inst.has_forbidden()) return inst;
  if (big <= 0.0) big = default_big(inst);
  std::vector<double> costs(inst.all_costs().begin(), inst.all_costs().end());
  for (double& c : costs)
    if (is_forbidden(c)) c = big;
  return inst.with_costs(std::move(costs));
}

namespace {

// Slack for factors computed as products or quotients of the declared bounds.
constexpr double kFactorSlack = 1e-12;

}  // namespace

void validate(const WeightPerturbation& p, std::size_t num_edges) {
  if (!(p.beta >= 1.0) || !(p.gamma >= 1.0)) throw ModelError("beta and gamma must be at least 1");
  if (p.factors.size() != num_edges) throw ModelError("one factor per edge is required");
  const double lo = 1.0 / p.beta;
  for (double f : p.factors) {
    if (!(f > 0.0) || std::isinf(f)) throw ModelError("factors must be positive and finite");
    if (f < lo * (1.0 - kFactorSlack) || f > p.gamma * (1.0 + kFactorSlack))
      throw ModelError("factor outside [1/beta, gamma]");
  }
}

PottsInstance apply_weight_perturbation(const PottsInstance& inst, const WeightPerturbation& p) {
  validate(p, inst.num_edges());
  std::vector<double> w = inst.weights();
  for (std::size_t e = 0; e < w.size(); ++e) w[e] *= p.factors[e];
  return inst.with_weights(std::move(w));
}

WeightPerturbation compose(const WeightPerturbation& first, const WeightPerturbation& second) {
  if (first.factors.size() != second.factors.size()) throw ModelError("perturbations differ in size");
  WeightPerturbation out{first.beta * second.beta, first.gamma * second.gamma, first.factors};
  for (std::size_t e = 0; e < out.factors.size(); ++e) out.factors[e] *= second.factors[e];
  return out;
}

Boundary boundary(const PottsInstance& inst, const NodeSet& block) {
  Boundary out;
  std::vector<NodeId> nodes;
  for (NodeId u : block) {
    if (u < 0 || u >= inst.num_nodes()) throw ModelError("block node out of range");
    bool on_boundary = false;
    for (const Incidence& inc : inst.incident(u)) {
      if (!block.contains(inc.neighbor)) {
        on_boundary = true;
        out.edges.push_back(inc.edge);
      }
    }
    if (on_boundary) nodes.push_back(u);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.nodes = NodeSet(std::move(nodes));
  return out;
}

std::vector<std::size_t> internal_edges(const PottsInstance& inst, const NodeSet& block) {
  std::vector<std::size_t> out;
  for (NodeId u : block)
    for (const Incidence& inc : inst.incident(u))
      if (inc.neighbor > u && block.contains(inc.neighbor)) out.push_back(inc.edge);
  std::sort(out.begin(), out.end());
  return out;
}

PottsInstance apply_cost_perturbation(const PottsInstance& inst, const CostPerturbation& cp) {
  const Boundary bd = boundary(inst, cp.block);
  const int k = inst.num_labels();
  std::vector<double> costs(inst.all_costs().begin(), inst.all_costs().end());
  for (const auto& [u, shift] : cp.psi) {
    if (!bd.nodes.contains(u)) throw ModelError("cost perturbation outside the block boundary");
    if (shift.size() != static_cast<std::size_t>(k)) throw ModelError("perturbation row has the wrong size");
    auto bound = cp.epsilon.find(u);
    for (Label i = 0; i < k; ++i) {
      const double eps = bound == cp.epsilon.end() ? 0.0 : std::abs(bound->second.at(i));
      if (std::abs(shift[i]) > eps) throw ModelError("cost perturbation exceeds its bound");
      costs[static_cast<std::size_t>(u) * k + i] += shift[i];
    }
  }
  return inst.with_costs(std::move(costs));
}

std::vector<double> reparametrized_costs(const PottsInstance& inst, const BlockDualSolution& delta) {
  if (delta.num_labels() != inst.num_labels() && !delta.edges().empty())
    throw ModelError("block dual label count does not match the instance");
  const int k = inst.num_labels();
  std::vector<double> costs(inst.all_costs().begin(), inst.all_costs().end());
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    for (const Incidence& inc : inst.incident(u)) {
      if (!delta.contains(inc.edge)) continue;
      auto msg = delta.message(inc.edge, side_of(inst.edge(inc.edge), u));
      for (Label i = 0; i < k; ++i) costs[static_cast<std::size_t>(u) * k + i] += msg[i];
    }
  }
  return costs;
}

namespace {

RestrictedInstance build_restricted(const PottsInstance& inst, const NodeSet& block,
                                    std::span<const double> costs) {
  const int k = inst.num_labels();
  RestrictedInstance out;
  out.nodes = block.ids();
  std::vector<double> local_costs;
  local_costs.reserve(block.size() * static_cast<std::size_t>(k));
  for (NodeId u : block) {
    if (u < 0 || u >= inst.num_nodes()) throw ModelError("block node out of range");
    for (Label i = 0; i < k; ++i) local_costs.push_back(costs[static_cast<std::size_t>(u) * k + i]);
  }
  out.edges = internal_edges(inst, block);
  std::vector<Edge> local_edges;
  local_edges.reserve(out.edges.size());
  for (std::size_t e : out.edges) {
    const Edge& edge = inst.edge(e);
    local_edges.push_back({static_cast<NodeId>(*block.index_of(edge.u)),
                           static_cast<NodeId>(*block.index_of(edge.v)), edge.weight});
  }
  out.instance = PottsInstance(static_cast<int>(block.size()), k, std::move(local_costs),
                               std::move(local_edges));
  return out;
}

}  // namespace

RestrictedInstance restricted_instance(const PottsInstance& inst, const NodeSet& block,
                                       const BlockDualSolution& delta) {
  const Boundary bd = boundary(inst, block);
  for (std::size_t e : bd.edges)
    if (!delta.contains(e)) throw ModelError("block dual is missing a boundary edge of the block");
  for (std::size_t e : delta.edges()) {
    if (e >= inst.num_edges()) throw ModelError("block dual keyed on an unknown edge");
    const Edge& edge = inst.edge(e);
    if (block.contains(edge.u) && block.contains(edge.v))
      throw ModelError("block dual keyed on an edge internal to the block");
  }
  const std::vector<double> costs = reparametrized_costs(inst, delta);
  return build_restricted(inst, block, costs);
}

RestrictedInstance restricted_instance(const PottsInstance& inst, const NodeSet& block) {
  return build_restricted(inst, block, inst.all_costs());
}

}  // namespace blockstab
