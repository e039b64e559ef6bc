#include "blockstab/local_polytope.hpp"

#include <cmath>

namespace blockstab {

LabelMask full_mask(int num_labels) {
  if (num_labels > kMaxMaskLabels) throw ModelError("label masks support at most 64 labels");
  return num_labels == kMaxMaskLabels ? ~LabelMask{0} : (LabelMask{1} << num_labels) - 1;
}

LabelMask finite_mask(const PottsInstance& inst, NodeId u) {
  if (inst.num_labels() > kMaxMaskLabels) throw ModelError("label masks support at most 64 labels");
  LabelMask mask = 0;
  for (Label i = 0; i < inst.num_labels(); ++i)
    if (!is_forbidden(inst.cost(u, i))) mask |= LabelMask{1} << i;
  return mask;
}

LocalPolytope::LocalPolytope(const PottsInstance& inst, std::span<const LabelMask> allowed,
                             std::span<const BudgetRow> budgets)
    : inst_(inst), k_(inst.num_labels()), allowed_(allowed.begin(), allowed.end()) {
  build(nullptr, budgets);
}

LocalPolytope::LocalPolytope(const PottsInstance& inst, const Labeling& reference,
                             std::span<const LabelMask> allowed, std::span<const BudgetRow> budgets)
    : inst_(inst), k_(inst.num_labels()), allowed_(allowed.begin(), allowed.end()) {
  inst.validate_labeling(reference);
  build(&reference, budgets);
}

int LocalPolytope::edge_col(std::size_t e, Label i, Label j) const {
  return edge_col_[(e * k_ + i) * k_ + j];
}

int LocalPolytope::edge_row(std::size_t e, Side side, Label label) const {
  return edge_row_[(2 * e + static_cast<std::size_t>(side)) * k_ + label];
}

void LocalPolytope::build(const Labeling* reference, std::span<const BudgetRow> budgets) {
  const int n = inst_.num_nodes();
  const std::size_t m = inst_.num_edges();
  if (!allowed_.empty()) {
    if (allowed_.size() != static_cast<std::size_t>(n)) throw ModelError("one label mask per node required");
    for (NodeId u = 0; u < n; ++u) {
      if ((allowed_[u] & full_mask(k_)) == 0) throw ModelError("node without an allowed label");
      allowed_[u] &= full_mask(k_);
    }
  }
  for (NodeId u = 0; u < n; ++u)
    for (Label i = 0; i < k_; ++i)
      if (is_allowed(u, i) && !std::isfinite(inst_.cost(u, i)))
        throw ModelError("allowed label with a forbidden cost");

  std::vector<int> budget_of(n, -1);
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    for (NodeId u : budgets[b].nodes) {
      if (u < 0 || u >= n) throw ModelError("budget row references an unknown node");
      if (budget_of[u] >= 0) throw ModelError("node in more than one budget row");
      budget_of[u] = static_cast<int>(b);
    }
  }

  for (NodeId u = 0; u < n; ++u) problem_.add_row(lp::RowSense::kEqual, 1.0);
  edge_row_.assign(2 * m * k_, -1);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge& edge = inst_.edge(e);
    for (Label i = 0; i < k_; ++i)
      if (is_allowed(edge.u, i)) edge_row_[(2 * e) * k_ + i] = problem_.add_row(lp::RowSense::kEqual, 0.0);
    Label last = -1;
    for (Label j = 0; j < k_; ++j)
      if (is_allowed(edge.v, j)) last = j;
    for (Label j = 0; j < last; ++j)
      if (is_allowed(edge.v, j)) edge_row_[(2 * e + 1) * k_ + j] = problem_.add_row(lp::RowSense::kEqual, 0.0);
  }
  // Budget rows are scaled to a unit largest coefficient; every other row
  // has coefficients of magnitude 1.
  std::vector<double> budget_scale(budgets.size(), 0.0);
  for (NodeId u = 0; u < n; ++u) {
    if (budget_of[u] < 0) continue;
    for (Label i = 0; i < k_; ++i)
      if (is_allowed(u, i)) budget_scale[budget_of[u]] = std::max(budget_scale[budget_of[u]], std::abs(inst_.cost(u, i)));
  }
  for (const Edge& edge : inst_.edges())
    if (budget_of[edge.u] >= 0 && budget_of[edge.u] == budget_of[edge.v])
      budget_scale[budget_of[edge.u]] = std::max(budget_scale[budget_of[edge.u]], edge.weight);
  for (double& s : budget_scale)
    if (!(s > 0.0)) s = 1.0;
  budget_row_start_ = problem_.num_rows();
  for (std::size_t b = 0; b < budgets.size(); ++b)
    problem_.add_row(lp::RowSense::kLessEqual, budgets[b].rhs / budget_scale[b]);

  std::vector<std::pair<int, double>> entries;
  node_col_.assign(static_cast<std::size_t>(n) * k_, -1);
  for (NodeId u = 0; u < n; ++u) {
    for (Label i = 0; i < k_; ++i) {
      if (!is_allowed(u, i)) continue;
      entries.clear();
      entries.emplace_back(node_row(u), 1.0);
      for (const Incidence& inc : inst_.incident(u)) {
        const int r = edge_row(inc.edge, side_of(inst_.edge(inc.edge), u), i);
        if (r >= 0) entries.emplace_back(r, -1.0);
      }
      const double theta = inst_.cost(u, i);
      if (budget_of[u] >= 0 && theta != 0.0) entries.emplace_back(budget_row(budget_of[u]), theta / budget_scale[budget_of[u]]);
      const double c = reference ? ((*reference)[u] == i ? 1.0 : 0.0) : theta;
      node_col_[index(u, i)] = problem_.add_column(c, 0.0, std::nullopt, entries);
    }
  }

  edge_col_.assign(m * k_ * k_, -1);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge& edge = inst_.edge(e);
    const int group = budget_of[edge.u] >= 0 && budget_of[edge.u] == budget_of[edge.v] ? budget_of[edge.u] : -1;
    for (Label i = 0; i < k_; ++i) {
      if (!is_allowed(edge.u, i)) continue;
      for (Label j = 0; j < k_; ++j) {
        if (!is_allowed(edge.v, j)) continue;
        entries.clear();
        entries.emplace_back(edge_row(e, Side::kFromU, i), 1.0);
        const int r = edge_row(e, Side::kFromV, j);
        if (r >= 0) entries.emplace_back(r, 1.0);
        const double w = i != j ? edge.weight : 0.0;
        if (group >= 0 && w != 0.0) entries.emplace_back(budget_row(group), w / budget_scale[group]);
        edge_col_[(e * k_ + i) * k_ + j] = problem_.add_column(reference ? 0.0 : w, 0.0, std::nullopt, entries);
      }
    }
  }
}

lp::StartBasis LocalPolytope::start_basis(const Labeling& f) const {
  inst_.validate_labeling(f);
  lp::StartBasis start;
  start.head.assign(problem_.num_rows(), -1);
  for (NodeId u = 0; u < inst_.num_nodes(); ++u) {
    if (!is_allowed(u, f[u])) throw ModelError("start labeling uses a disallowed label");
    start.head[node_row(u)] = node_col(u, f[u]);
  }
  // Per edge a spanning tree of label pairs that contains (f(u), f(v)):
  // the pairs (f(u), j) and the diagonal (i, i) for i != f(u). With x fixed
  // at f it pins the edge marginals, and the Potts edge costs price every
  // other pair nonnegatively. Labels missing on v's side hang off (i, f(v)).
  std::vector<int> tree;
  for (std::size_t e = 0; e < inst_.num_edges(); ++e) {
    const Edge& edge = inst_.edge(e);
    const Label a = f[edge.u], b = f[edge.v];
    tree.clear();
    for (Label j = 0; j < k_; ++j)
      if (is_allowed(edge.v, j)) tree.push_back(edge_col(e, a, j));
    for (Label i = 0; i < k_; ++i) {
      if (i == a || !is_allowed(edge.u, i)) continue;
      tree.push_back(edge_col(e, i, is_allowed(edge.v, i) ? i : b));
    }
    std::size_t next = 0;
    for (Side side : {Side::kFromU, Side::kFromV})
      for (Label i = 0; i < k_; ++i)
        if (const int r = edge_row(e, side, i); r >= 0) start.head[r] = tree[next++];
  }
  return start;
}

}  // namespace blockstab
