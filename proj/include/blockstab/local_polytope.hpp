#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockstab/duals.hpp"
#include "blockstab/model.hpp"
#include "blockstab/simplex.hpp"

namespace blockstab {

/// Bit i set = label i allowed. Limits branch-and-bound searches to k <= 64.
using LabelMask = std::uint64_t;

inline constexpr int kMaxMaskLabels = 64;

LabelMask full_mask(int num_labels);

/// Mask of the labels with a finite cost at node u.
LabelMask finite_mask(const PottsInstance& inst, NodeId u);

/// Energy row  sum_{u in nodes} theta_u(x_u) + sum_{edges inside nodes} w [i != j] x_uv <= rhs.
struct BudgetRow {
  std::vector<NodeId> nodes;  ///< sorted
  double rhs = 0.0;
};

/// Explicit local-polytope LP:
///   columns x_u(i) for allowed labels, then x_uv(i, j) for allowed pairs;
///   one normalization row per node; per edge the rows
///     sum_j x_uv(i, j) - x_u(i) = 0   for every allowed i of u,
///     sum_i x_uv(i, j) - x_v(j) = 0   for every allowed j of v but the last
///   (the dropped row is implied by the others); then the budget rows, at most
///   one per node.
/// With d = c - A^T y the multiplier of the u-side row for label i is
/// eta_uv(i), the v-side one eta_vu(j), and the dropped row has eta = 0.
class LocalPolytope {
 public:
  /// Minimizes the Potts energy. Allowed labels must have finite costs.
  LocalPolytope(const PottsInstance& inst, std::span<const LabelMask> allowed = {},
                std::span<const BudgetRow> budgets = {});

  /// Minimizes sum_u x_u(reference(u)) instead, i.e. maximizes the
  /// fractional disagreement with `reference`.
  LocalPolytope(const PottsInstance& inst, const Labeling& reference,
                std::span<const LabelMask> allowed, std::span<const BudgetRow> budgets);

  const lp::Problem<double>& problem() const { return problem_; }

  /// Basis at the vertex of labeling f: x_u(f(u)) in the normalization rows,
  /// x_uv(f(u), f(v)) in the u-side row of f(u), zero artificials and slacks
  /// elsewhere. f must use allowed labels.
  lp::StartBasis start_basis(const Labeling& f) const;

  int node_col(NodeId u, Label i) const { return node_col_[index(u, i)]; }
  int edge_col(std::size_t e, Label i, Label j) const;
  int node_row(NodeId u) const { return u; }
  /// -1 for the dropped or disallowed rows.
  int edge_row(std::size_t e, Side side, Label label) const;
  int budget_row(std::size_t b) const { return budget_row_start_ + static_cast<int>(b); }

  bool is_allowed(NodeId u, Label i) const {
    return allowed_.empty() || ((allowed_[u] >> i) & 1U) != 0;
  }

 private:
  void build(const Labeling* reference, std::span<const BudgetRow> budgets);
  std::size_t index(NodeId u, Label i) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(i);
  }

  const PottsInstance& inst_;
  int k_;
  std::vector<LabelMask> allowed_;
  lp::Problem<double> problem_;
  std::vector<int> node_col_;
  std::vector<int> edge_col_;  // k * k per edge, -1 if absent
  std::vector<int> edge_row_;  // 2k per edge
  int budget_row_start_ = 0;
};

}  // namespace blockstab
