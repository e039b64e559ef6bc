#include "blockstab/hamming_ilp.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <thread>

#include "blockstab/dual_decomp.hpp"
#include "blockstab/local_polytope.hpp"
#include "blockstab/lp_solver.hpp"

namespace blockstab {

namespace {

struct GroupResult {
  Labeling best;
  std::size_t distance = 0;
  bool proven = true;
  std::size_t nodes = 0;
};

std::uint64_t count_labelings(const PottsInstance& inst, std::uint64_t limit) {
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

GroupResult exhaustive(const PottsInstance& inst, const Labeling& g, const ObjectiveBudget& budget) {
  const int n = inst.num_nodes();
  std::vector<std::vector<Label>> choices(n);
  for (NodeId u = 0; u < n; ++u)
    for (Label i = 0; i < inst.num_labels(); ++i)
      if (!is_forbidden(inst.cost(u, i))) choices[u].push_back(i);

  const double guard = 2.0 * kObjectiveTieWindow * objective_scale(inst);
  auto local = [&](const Labeling& f, NodeId u) {
    double s = inst.cost(u, f[u]);
    for (const Incidence& inc : inst.incident(u))
      if (f[inc.neighbor] != f[u]) s += inst.edge(inc.edge).weight;
    return s;
  };

  std::vector<std::size_t> digit(n, 0);
  Labeling f(n, 0);
  std::size_t distance = 0;
  for (NodeId u = 0; u < n; ++u) {
    f[u] = choices[u][0];
    if (f[u] != g[u]) ++distance;
  }
  double running = objective(inst, f);

  GroupResult out;
  out.best = g;
  std::size_t steps = 0;
  auto consider = [&] {
    if (distance <= out.distance) return;
    if (running > budget.reference_value() + guard) return;
    const double q = objective(inst, f);
    running = q;
    if (budget.admits(f, q)) {
      out.best = f;
      out.distance = distance;
    }
  };
  consider();
  while (true) {
    int u = n - 1;
    while (u >= 0 && digit[u] + 1 == choices[u].size()) --u;
    if (u < 0) break;
    for (int t = n - 1; t >= u; --t) {
      const double before = local(f, t);
      if (f[t] != g[t]) --distance;
      digit[t] = t == u ? digit[t] + 1 : 0;
      f[t] = choices[t][digit[t]];
      if (f[t] != g[t]) ++distance;
      running += local(f, t) - before;
    }
    if (++steps % 4096 == 0) running = objective(inst, f);
    consider();
  }
  out.nodes = steps + 1;
  return out;
}

// Every f satisfies Q(f) >= P(eta) + sum of the decoding margins of the nodes
// where f leaves g. When eta decodes to g everywhere, no f != g fits the
// budget once P(eta) plus the smallest margin clears Q(g).
bool dual_certifies(const PottsInstance& inst, const Labeling& g, const DualSolution& eta,
                    const ObjectiveBudget& budget) {
  double min_margin = kForbidden;
  std::vector<double> reparam(inst.num_labels());
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    for (Label i = 0; i < inst.num_labels(); ++i) reparam[i] = inst.cost(u, i);
    for (const Incidence& inc : inst.incident(u)) {
      const auto m = eta.message(inc.edge, side_of(inst.edge(inc.edge), u));
      for (Label i = 0; i < inst.num_labels(); ++i) reparam[i] += m[i];
    }
    for (Label i = 0; i < inst.num_labels(); ++i) {
      if (i == g[u] || is_forbidden(inst.cost(u, i))) continue;
      min_margin = std::min(min_margin, reparam[i] - reparam[g[u]]);
    }
  }
  if (!(min_margin > 0.0)) return false;
  if (is_forbidden(min_margin)) return true;  // g is the only finite labeling
  const double guard = 1e-8 * objective_scale(inst);
  return pairwise_dual_value(inst, eta) + min_margin > budget.reference_value() + guard;
}

struct SearchNode {
  double upper;  // bound on the distance
  std::size_t id;
  std::vector<LabelMask> allowed;
  std::vector<double> x;  // node marginals, n x k
};

struct SearchOrder {
  bool operator()(const SearchNode* a, const SearchNode* b) const {
    if (a->upper != b->upper) return a->upper < b->upper;
    return a->id > b->id;
  }
};

GroupResult branch_and_bound(const PottsInstance& inst, const Labeling& g, const ObjectiveBudget& budget,
                             const HammingOptions& options, const GroupResult& incumbent) {
  const int n = inst.num_nodes();
  const int k = inst.num_labels();
  // A looser budget in the relaxation keeps its bound valid.
  std::vector<NodeId> all(n);
  for (NodeId u = 0; u < n; ++u) all[u] = u;
  const BudgetRow row{all, budget.reference_value() + 1e-7 * objective_scale(inst)};

  GroupResult out;
  out.best = incumbent.best;
  out.distance = incumbent.distance;

  auto offer = [&](const Labeling& f) {
    const std::size_t d = hamming_distance(f, g);
    if (d > out.distance && budget.admits(f)) {
      out.best = f;
      out.distance = d;
    }
  };

  std::vector<std::unique_ptr<SearchNode>> storage;
  std::priority_queue<SearchNode*, std::vector<SearchNode*>, SearchOrder> open;
  std::size_t next_id = 0;

  auto pruned = [&](double upper) { return std::floor(upper + 1e-6) <= static_cast<double>(out.distance); };

  auto push = [&](std::vector<LabelMask> allowed) {
    ++out.nodes;
    const LocalPolytope lp(inst, g, allowed, std::span<const BudgetRow>(&row, 1));
    // Start at the best witness so far, or else at g, moved to the cheapest
    // allowed label where the branch forbids it. An over-budget start is
    // discarded by the solver.
    auto adjusted = [&](Labeling f) {
      for (NodeId u = 0; u < n; ++u) {
        if ((allowed[u] >> f[u]) & 1U) continue;
        Label pick = -1;
        for (Label i = 0; i < k; ++i)
          if (((allowed[u] >> i) & 1U) && (pick < 0 || inst.cost(u, i) < inst.cost(u, pick))) pick = i;
        f[u] = pick;
      }
      return f;
    };
    Labeling start_labeling = adjusted(out.best);
    if (out.distance > 0 && !(objective(inst, start_labeling) <= row.rhs)) start_labeling = adjusted(g);
    const lp::StartBasis start = lp.start_basis(start_labeling);
    lp::Solution<double> sol;
    try {
      sol = lp::solve(lp.problem(), {}, &start);
    } catch (const lp::SolverError&) {
      sol.status = lp::Status::kIterationLimit;
    }
    if (sol.status == lp::Status::kInfeasible) return;
    // A subtree whose relaxation cannot be solved stays unexplored, so the
    // result is no longer a proof.
    if (sol.status != lp::Status::kOptimal) {
      out.proven = false;
      return;
    }
    auto node = std::make_unique<SearchNode>();
    node->upper = static_cast<double>(n) - sol.objective;
    if (pruned(node->upper)) return;
    node->x.assign(static_cast<std::size_t>(n) * k, 0.0);
    Labeling f(n, 0);
    bool integral = true;
    for (NodeId u = 0; u < n; ++u) {
      double top = -1.0;
      for (Label i = 0; i < k; ++i) {
        const int c = lp.node_col(u, i);
        const double v = c >= 0 ? sol.x[c] : 0.0;
        node->x[static_cast<std::size_t>(u) * k + i] = v;
        if (v > top) {
          top = v;
          f[u] = i;
        }
      }
      if (top < 1.0 - kTolerance) integral = false;
    }
    offer(f);
    // An integral optimum that passes the exact budget settles the node.
    if (integral && budget.admits(f)) return;
    if (pruned(node->upper)) return;
    node->allowed = std::move(allowed);
    node->id = next_id++;
    open.push(node.get());
    storage.push_back(std::move(node));
  };

  std::vector<LabelMask> root(n);
  for (NodeId u = 0; u < n; ++u) root[u] = finite_mask(inst, u);
  push(root);

  while (!open.empty()) {
    SearchNode* node = open.top();
    open.pop();
    if (pruned(node->upper)) continue;
    if (out.nodes >= options.node_limit) {
      out.proven = false;
      break;
    }
    // Most fractional x_u(i) among nodes that still have a choice.
    NodeId pick = -1;
    Label pick_label = -1;
    double pick_score = 2.0;
    for (NodeId u = 0; u < n; ++u) {
      if (std::popcount(node->allowed[u]) < 2) continue;
      for (Label i = 0; i < k; ++i) {
        if (!((node->allowed[u] >> i) & 1U)) continue;
        const double v = node->x[static_cast<std::size_t>(u) * k + i];
        const double score = std::abs(v - 0.5);
        if (v > kTolerance && v < 1.0 - kTolerance && score < pick_score) {
          pick_score = score;
          pick = u;
          pick_label = i;
        }
      }
    }
    if (pick < 0) {
      // Integral but rejected by the exact budget: split a free node by label.
      for (NodeId u = 0; u < n && pick < 0; ++u)
        if (std::popcount(node->allowed[u]) >= 2) pick = u;
      if (pick < 0) continue;
      for (Label i = 0; i < k; ++i) {
        if (!((node->allowed[pick] >> i) & 1U)) continue;
        std::vector<LabelMask> child = node->allowed;
        child[pick] = LabelMask{1} << i;
        push(std::move(child));
      }
    } else {
      std::vector<LabelMask> fixed = node->allowed;
      fixed[pick] = LabelMask{1} << pick_label;
      std::vector<LabelMask> removed = node->allowed;
      removed[pick] &= ~(LabelMask{1} << pick_label);
      push(std::move(fixed));
      push(std::move(removed));
    }
    node->x.clear();
    node->x.shrink_to_fit();
  }
  return out;
}

GroupResult solve_group(const PottsInstance& inst, const Labeling& g, const HammingOptions& options) {
  const ObjectiveBudget budget(inst, g, options.arithmetic);
  if (is_forbidden(budget.reference_value())) throw ModelError("reference labeling has a forbidden cost");
  if (count_labelings(inst, options.exhaustive_limit) <= options.exhaustive_limit) return exhaustive(inst, g, budget);
  if (inst.num_labels() > kMaxMaskLabels) throw ModelError("branch and bound supports at most 64 labels");

  GroupResult seed;
  seed.best = g;
  if (options.arithmetic == Arithmetic::kFloat) {
    try {
      const LpResult lp = solve_lp(inst);
      if (dual_certifies(inst, g, balance_dual(inst, lp.dual, options.certificate_sweeps), budget)) {
        seed.nodes = 1;
        return seed;
      }
      MapOptions mo;
      mo.exhaustive_limit = options.exhaustive_limit;
      mo.node_limit = options.witness_node_limit;
      const MapResult map = solve_map(inst, mo);
      if (budget.admits(map.labeling)) {
        seed.best = map.labeling;
        seed.distance = hamming_distance(map.labeling, g);
      }
    } catch (const std::runtime_error&) {
      // No shortcut; the exact search below decides.
    }
  }
  if (options.search_size_limit > 0 && static_cast<std::size_t>(inst.num_nodes()) > options.search_size_limit) {
    seed.proven = false;
    return seed;
  }
  return branch_and_bound(inst, g, budget, options, seed);
}

}  // namespace

HammingResult max_hamming(const PottsInstance& inst, const Labeling& reference, std::span<const int> group,
                          const HammingOptions& options) {
  inst.validate_labeling(reference);
  const int n = inst.num_nodes();
  if (!group.empty() && group.size() != static_cast<std::size_t>(n)) throw ModelError("one group id per node required");
  auto group_of = [&](NodeId u) { return group.empty() ? 0 : group[u]; };
  for (const Edge& e : inst.edges())
    if (group_of(e.u) != group_of(e.v)) throw ModelError("an edge joins two groups");

  std::map<int, std::vector<NodeId>> members;
  for (NodeId u = 0; u < n; ++u) members[group_of(u)].push_back(u);
  std::vector<std::pair<int, NodeSet>> work;
  for (auto& [id, nodes] : members) work.emplace_back(id, NodeSet(std::move(nodes)));

  std::vector<RestrictedInstance> subs(work.size());
  std::vector<GroupResult> results(work.size());
  std::vector<std::exception_ptr> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      try {
        subs[w] = restricted_instance(inst, work[w].second);
        results[w] = solve_group(subs[w].instance, reference.restricted_to(work[w].second), options);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(work.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  HammingResult result;
  result.best = reference;
  for (std::size_t w = 0; w < work.size(); ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
    const GroupResult& r = results[w];
    for (std::size_t l = 0; l < subs[w].nodes.size(); ++l) result.best[subs[w].nodes[l]] = r.best[l];
    result.distance += r.distance;
    result.proven = result.proven && r.proven;
    result.nodes_explored += r.nodes;
    result.groups.push_back({work[w].first, r.distance, r.proven});
  }
  return result;
}

}  // namespace blockstab
