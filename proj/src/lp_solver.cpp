#include "blockstab/lp_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <queue>

#include "blockstab/local_polytope.hpp"

namespace blockstab {

namespace {

void fill_from_columns(const PottsInstance& inst, const LocalPolytope& lp, std::span<const double> col,
                       PrimalSolution& out) {
  const int k = inst.num_labels();
  out.num_nodes = inst.num_nodes();
  out.num_labels = k;
  out.num_edges = inst.num_edges();
  out.node_marginals.assign(static_cast<std::size_t>(out.num_nodes) * k, 0.0);
  out.edge_marginals.assign(out.num_edges * k * k, 0.0);
  for (NodeId u = 0; u < inst.num_nodes(); ++u)
    for (Label i = 0; i < k; ++i)
      if (int c = lp.node_col(u, i); c >= 0) out.x(u, i) = col[c];
  for (std::size_t e = 0; e < inst.num_edges(); ++e)
    for (Label i = 0; i < k; ++i)
      for (Label j = 0; j < k; ++j)
        if (int c = lp.edge_col(e, i, j); c >= 0) out.mu(e, i, j) = col[c];
}

void fill_duals(const PottsInstance& inst, const LocalPolytope& lp, std::span<const double> y, DualSolution& out) {
  const int k = inst.num_labels();
  out = DualSolution(inst.num_edges(), k);
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    for (Side side : {Side::kFromU, Side::kFromV}) {
      auto msg = out.message(e, side);
      for (Label i = 0; i < k; ++i) {
        const int r = lp.edge_row(e, side, i);
        msg[i] = r >= 0 ? y[r] : 0.0;
      }
    }
  }
}

Labeling iterated_conditional_modes(const PottsInstance& inst, Labeling f) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (NodeId u = 0; u < inst.num_nodes(); ++u) {
      Label best = f[u];
      double best_cost = kForbidden;
      for (Label i = 0; i < inst.num_labels(); ++i) {
        double c = inst.cost(u, i);
        if (is_forbidden(c)) continue;
        for (const Incidence& inc : inst.incident(u))
          if (f[inc.neighbor] != i) c += inst.edge(inc.edge).weight;
        if (c < best_cost - 1e-12) {
          best_cost = c;
          best = i;
        }
      }
      if (best != f[u]) {
        f[u] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return f;
}

Labeling unary_argmin(const PottsInstance& inst) {
  Labeling f(inst.num_nodes(), 0);
  for (NodeId u = 0; u < inst.num_nodes(); ++u)
    for (Label i = 1; i < inst.num_labels(); ++i)
      if (inst.cost(u, i) < inst.cost(u, f[u])) f[u] = i;
  return f;
}

}  // namespace

LpResult solve_lp(const PottsInstance& inst, const LpOptions& options) {
  const PottsInstance finite = inst.has_forbidden() ? with_finite_costs(inst, options.big) : inst;
  const LocalPolytope lp(finite);
  LpResult result;

  if (options.arithmetic == Arithmetic::kExact) {
    const auto exact = lp.problem().convert<Rational>([](double v) { return to_rational(v); });
    const lp::Solution<Rational> sol = lp::solve(exact, options.simplex);
    if (sol.status != lp::Status::kOptimal)
      throw LpError(std::string("exact LP solve failed: ") + lp::to_string(sol.status));
    std::vector<double> x(sol.x.size()), y(sol.row_duals.size());
    std::transform(sol.x.begin(), sol.x.end(), x.begin(), [](const Rational& q) { return q.get_d(); });
    std::transform(sol.row_duals.begin(), sol.row_duals.end(), y.begin(),
                   [](const Rational& q) { return q.get_d(); });
    fill_from_columns(finite, lp, x, result.primal);
    fill_duals(finite, lp, y, result.dual);
    result.primal.objective = sol.objective.get_d();
    result.exact_objective = sol.objective;
    result.dual_degenerate = sol.dual_degenerate;
    result.iterations = sol.iterations;
    return result;
  }

  const lp::StartBasis start = lp.start_basis(iterated_conditional_modes(finite, unary_argmin(finite)));
  const lp::Solution<double> sol = lp::solve(lp.problem(), options.simplex, &start);
  if (sol.status != lp::Status::kOptimal)
    throw LpError(std::string("LP solve failed: ") + lp::to_string(sol.status));
  fill_from_columns(finite, lp, sol.x, result.primal);
  fill_duals(finite, lp, sol.row_duals, result.dual);
  result.primal.objective = sol.objective;
  result.dual_degenerate = sol.dual_degenerate;
  result.iterations = sol.iterations;
  return result;
}

std::size_t PersistencyMask::count(Persistency p) const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), p));
}

PersistencyMask persistency_mask(const PrimalSolution& x, const Labeling& g, double tol) {
  if (g.size() != static_cast<std::size_t>(x.num_nodes)) throw ModelError("labeling size does not match solution");
  PersistencyMask mask;
  mask.flags.resize(g.size(), Persistency::kFractional);
  std::size_t matches = 0;
  for (NodeId u = 0; u < x.num_nodes; ++u) {
    Label best = 0;
    for (Label i = 1; i < x.num_labels; ++i)
      if (x.x(u, i) > x.x(u, best)) best = i;
    if (x.x(u, best) < 1.0 - tol) continue;
    if (best == g[u]) {
      mask.flags[u] = Persistency::kIntegralMatch;
      ++matches;
    } else {
      mask.flags[u] = Persistency::kIntegralMismatch;
    }
  }
  mask.fraction = g.size() == 0 ? 1.0 : static_cast<double>(matches) / static_cast<double>(g.size());
  return mask;
}

namespace {

// Number of labelings with finite cost, saturating at limit + 1.
std::uint64_t finite_labelings(const PottsInstance& inst, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    std::uint64_t c = 0;
    for (double v : inst.costs(u))
      if (!is_forbidden(v)) ++c;
    if (total > (limit + 1) / c) return limit + 1;
    total *= c;
  }
  return total;
}

// Lexicographic enumeration over finite labels, last node fastest.
MapResult enumerate_lexicographic(const PottsInstance& inst, Arithmetic mode) {
  const int n = inst.num_nodes();
  std::vector<std::vector<Label>> choices(n);
  for (NodeId u = 0; u < n; ++u)
    for (Label i = 0; i < inst.num_labels(); ++i)
      if (!is_forbidden(inst.cost(u, i))) choices[u].push_back(i);

  std::vector<std::size_t> digit(n, 0);
  Labeling f(n, 0);
  for (NodeId u = 0; u < n; ++u) f[u] = choices[u][0];
  const ObjectiveComparator compare(inst, mode);

  auto local = [&](NodeId u) {
    double s = inst.cost(u, f[u]);
    for (const Incidence& inc : inst.incident(u))
      if (f[inc.neighbor] != f[u]) s += inst.edge(inc.edge).weight;
    return s;
  };

  double running = objective(inst, f);
  MapResult best;
  best.labeling = f;
  best.value = running;
  std::size_t steps = 0;
  while (true) {
    int u = n - 1;
    while (u >= 0 && digit[u] + 1 == choices[u].size()) --u;
    if (u < 0) break;
    // Reset the tail to its first choice, then advance u.
    for (int t = n - 1; t >= u; --t) {
      const double before = local(t);
      digit[t] = t == u ? digit[t] + 1 : 0;
      f[t] = choices[t][digit[t]];
      running += local(t) - before;
    }
    if (++steps % 4096 == 0) running = objective(inst, f);
    if (running > best.value + compare.window()) continue;
    const double exact = objective(inst, f);
    running = exact;
    if (compare(f, exact, best.labeling, best.value) == std::weak_ordering::less) {
      best.labeling = f;
      best.value = exact;
    }
  }
  best.nodes_explored = steps + 1;
  return best;
}

struct SearchNode {
  double bound;
  std::size_t id;
  std::vector<LabelMask> allowed;
  PrimalSolution x;
};

struct SearchOrder {
  bool operator()(const SearchNode* a, const SearchNode* b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

MapResult branch_and_bound(const PottsInstance& inst, const MapOptions& options) {
  const int n = inst.num_nodes();
  const int k = inst.num_labels();
  const ObjectiveComparator compare(inst, options.arithmetic);
  const double window = compare.window();

  std::vector<LabelMask> root(n);
  for (NodeId u = 0; u < n; ++u) root[u] = finite_mask(inst, u);

  MapResult best;
  auto relax = [&](const std::vector<LabelMask>& allowed, PrimalSolution& x) {
    const LocalPolytope lp(inst, allowed);
    // Start from the incumbent, moved onto the cheapest allowed label where
    // the branch forbids it.
    Labeling f = best.labeling.size() != 0 ? best.labeling : unary_argmin(inst);
    for (NodeId u = 0; u < n; ++u) {
      if ((allowed[u] >> f[u]) & 1U) continue;
      for (Label i = 0; i < k; ++i)
        if (((allowed[u] >> i) & 1U) && (!((allowed[u] >> f[u]) & 1U) || inst.cost(u, i) < inst.cost(u, f[u])))
          f[u] = i;
    }
    const lp::StartBasis start = lp.start_basis(f);
    const lp::Solution<double> sol = lp::solve(lp.problem(), {}, &start);
    if (sol.status != lp::Status::kOptimal) throw LpError("relaxation failed in branch and bound");
    fill_from_columns(inst, lp, sol.x, x);
    x.objective = sol.objective;
  };
  auto rounded = [&](const PrimalSolution& x) {
    Labeling f(n, 0);
    for (NodeId u = 0; u < n; ++u)
      for (Label i = 1; i < k; ++i)
        if (x.x(u, i) > x.x(u, f[u])) f[u] = i;
    return f;
  };
  auto integral = [&](const PrimalSolution& x) {
    for (NodeId u = 0; u < n; ++u) {
      double m = 0.0;
      for (Label i = 0; i < k; ++i) m = std::max(m, x.x(u, i));
      if (m < 1.0 - kTolerance) return false;
    }
    return true;
  };

  auto offer = [&](const Labeling& f) {
    const double q = objective(inst, f);
    if (is_forbidden(q)) return;
    if (best.labeling.size() == 0) {
      best.labeling = f;
      best.value = q;
      return;
    }
    const auto c = compare(f, q, best.labeling, best.value);
    if (c == std::weak_ordering::less || (c == std::weak_ordering::equivalent && f < best.labeling)) {
      best.labeling = f;
      best.value = q;
    }
  };

  std::vector<std::unique_ptr<SearchNode>> storage;
  std::priority_queue<SearchNode*, std::vector<SearchNode*>, SearchOrder> open;
  std::size_t next_id = 0;
  auto push = [&](std::vector<LabelMask> allowed) {
    auto node = std::make_unique<SearchNode>();
    node->allowed = std::move(allowed);
    relax(node->allowed, node->x);
    ++best.nodes_explored;
    node->bound = node->x.objective;
    const Labeling f = rounded(node->x);
    if (integral(node->x)) {
      offer(f);
      return;
    }
    offer(iterated_conditional_modes(inst, f));
    node->id = next_id++;
    open.push(node.get());
    storage.push_back(std::move(node));
  };

  push(root);
  while (!open.empty()) {
    SearchNode* node = open.top();
    open.pop();
    if (node->bound >= best.value - window) continue;
    if (best.nodes_explored >= options.node_limit) {
      best.proven_optimal = false;
      break;
    }
    // Most fractional node: smallest largest marginal.
    NodeId pick = -1;
    double pick_max = 2.0;
    for (NodeId u = 0; u < n; ++u) {
      if (std::popcount(node->allowed[u]) < 2) continue;
      double m = 0.0;
      for (Label i = 0; i < k; ++i) m = std::max(m, node->x.x(u, i));
      if (m < pick_max) {
        pick_max = m;
        pick = u;
      }
    }
    if (pick < 0) continue;
    std::vector<Label> labels;
    for (Label i = 0; i < k; ++i)
      if ((node->allowed[pick] >> i) & 1U) labels.push_back(i);
    std::stable_sort(labels.begin(), labels.end(),
                     [&](Label a, Label b) { return node->x.x(pick, a) > node->x.x(pick, b); });
    for (Label i : labels) {
      std::vector<LabelMask> child = node->allowed;
      child[pick] = LabelMask{1} << i;
      push(std::move(child));
    }
    node->x = PrimalSolution{};
  }
  return best;
}

}  // namespace

MapResult solve_map(const PottsInstance& inst, const MapOptions& options) {
  if (inst.num_nodes() == 0) return MapResult{};
  if (finite_labelings(inst, options.exhaustive_limit) <= options.exhaustive_limit)
    return enumerate_lexicographic(inst, options.arithmetic);
  return branch_and_bound(inst, options);
}

}  // namespace blockstab
