#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockstab {

using NodeId = std::int32_t;
using Label = std::int32_t;

/// Global tolerance for equality and integrality tests in double mode.
inline constexpr double kTolerance = 1e-6;

/// Forbidden node cost. Compares above every finite cost.
inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

inline bool is_forbidden(double cost) { return cost == kForbidden; }

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

/// One entry of a node's adjacency list.
struct Incidence {
  NodeId neighbor = 0;
  std::size_t edge = 0;
};

/// Sorted set of node ids without duplicates.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::vector<NodeId> nodes);

  static NodeSet range(NodeId count);

  bool contains(NodeId u) const;
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  NodeId operator[](std::size_t i) const { return nodes_[i]; }
  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }
  const std::vector<NodeId>& ids() const { return nodes_; }

  /// Position of u inside the set, if present.
  std::optional<std::size_t> index_of(NodeId u) const;

  bool operator==(const NodeSet&) const = default;

 private:
  std::vector<NodeId> nodes_;
};

NodeSet set_difference(const NodeSet& a, const NodeSet& b);
NodeSet set_union(const NodeSet& a, const NodeSet& b);

/// Total assignment of labels to nodes.
class Labeling {
 public:
  Labeling() = default;
  explicit Labeling(std::vector<Label> labels) : labels_(std::move(labels)) {}
  Labeling(std::size_t size, Label value) : labels_(size, value) {}

  std::size_t size() const { return labels_.size(); }
  Label operator[](std::size_t u) const { return labels_[u]; }
  Label& operator[](std::size_t u) { return labels_[u]; }
  std::span<const Label> labels() const { return labels_; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  /// Labels of the nodes in `nodes`, in set order.
  Labeling restricted_to(const NodeSet& nodes) const;

  auto operator<=>(const Labeling&) const = default;

 private:
  std::vector<Label> labels_;
};

/// Number of nodes on which two labelings disagree.
std::size_t hamming_distance(const Labeling& a, const Labeling& b);

/// Potts model instance: graph, node costs theta, nonnegative weights w, k labels.
class PottsInstance {
 public:
  PottsInstance() = default;

  /// `costs` is row-major, num_nodes x num_labels. Edges may be given in either
  /// orientation; they are canonicalized to u < v and keep their input order.
  PottsInstance(int num_nodes, int num_labels, std::vector<double> costs,
                std::vector<Edge> edges);

  int num_nodes() const { return num_nodes_; }
  int num_labels() const { return num_labels_; }
  std::size_t num_edges() const { return edges_.size(); }

  double cost(NodeId u, Label i) const {
    return costs_[static_cast<std::size_t>(u) * num_labels_ + i];
  }
  std::span<const double> costs(NodeId u) const {
    return {costs_.data() + static_cast<std::size_t>(u) * num_labels_,
            static_cast<std::size_t>(num_labels_)};
  }
  std::span<const double> all_costs() const { return costs_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  std::vector<double> weights() const;

  std::span<const Incidence> incident(NodeId u) const {
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  std::optional<std::size_t> find_edge(NodeId a, NodeId b) const;

  bool has_forbidden() const;
  /// Largest absolute finite cost or weight.
  double max_finite_magnitude() const;

  PottsInstance with_weights(std::vector<double> weights) const;
  PottsInstance with_costs(std::vector<double> costs) const;

  /// Checks that f is a total assignment of valid labels.
  void validate_labeling(const Labeling& f) const;

 private:
  void build_adjacency();

  int num_nodes_ = 0;
  int num_labels_ = 0;
  std::vector<double> costs_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> adjacency_;
};

/// Q(f): node costs plus weights of cut edges. Forbidden labels give kForbidden.
double objective(const PottsInstance& inst, const Labeling& f);

/// Default finite stand-in for forbidden costs: 1e6 x max finite magnitude, at least 1e6.
double default_big(const PottsInstance& inst);

/// Copy of `inst` with forbidden costs replaced by `big` (default_big when <= 0).
PottsInstance with_finite_costs(const PottsInstance& inst, double big = 0.0);

/// Per-edge multiplicative weight factors declared as a (beta, gamma)-perturbation.
struct WeightPerturbation {
  double beta = 1.0;
  double gamma = 1.0;
  std::vector<double> factors;
};

/// Rejects factors outside [1/beta, gamma].
void validate(const WeightPerturbation& p, std::size_t num_edges);

PottsInstance apply_weight_perturbation(const PottsInstance& inst, const WeightPerturbation& p);

/// Applying `second` after `first` is a (beta beta', gamma gamma')-perturbation.
WeightPerturbation compose(const WeightPerturbation& first, const WeightPerturbation& second);

/// Per-node, per-label table keyed by node id.
using NodeLabelTable = std::map<NodeId, std::vector<double>>;

/// Additive cost change psi on the boundary nodes of `block`, bounded by |epsilon|.
struct CostPerturbation {
  NodeSet block;
  NodeLabelTable epsilon;
  NodeLabelTable psi;
};

PottsInstance apply_cost_perturbation(const PottsInstance& inst, const CostPerturbation& cp);

struct Boundary {
  NodeSet nodes;                   ///< nodes of S with a neighbor outside S
  std::vector<std::size_t> edges;  ///< edges with exactly one endpoint in S, ascending
};

Boundary boundary(const PottsInstance& inst, const NodeSet& block);

/// Edges with both endpoints in `block`, ascending.
std::vector<std::size_t> internal_edges(const PottsInstance& inst, const NodeSet& block);

class BlockDualSolution;

/// theta^delta for every node: theta plus the delta messages of all keyed
/// edges incident to that node.
std::vector<double> reparametrized_costs(const PottsInstance& inst, const BlockDualSolution& delta);

/// Sub-instance on a block, with the maps back to the parent instance.
struct RestrictedInstance {
  PottsInstance instance;
  std::vector<NodeId> nodes;       ///< local node -> parent node
  std::vector<std::size_t> edges;  ///< local edge -> parent edge
};

/// ((S, E_S), theta^delta|_S, w|_{E_S}, L). delta must key every boundary edge
/// of S and no edge internal to S.
RestrictedInstance restricted_instance(const PottsInstance& inst, const NodeSet& block,
                                       const BlockDualSolution& delta);

/// Same sub-instance with theta unchanged.
RestrictedInstance restricted_instance(const PottsInstance& inst, const NodeSet& block);

}  // namespace blockstab
