#include "blockstab/block_finder.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <thread>

namespace blockstab {

BlockDecomposition initial_decomposition(const PottsInstance& inst, const Labeling& g) {
  inst.validate_labeling(g);
  std::vector<std::vector<NodeId>> interior(inst.num_labels());
  std::vector<NodeId> boundary;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    bool inside = true;
    for (const Incidence& inc : inst.incident(u))
      if (g[inc.neighbor] != g[u]) inside = false;
    (inside ? interior[g[u]] : boundary).push_back(u);
  }
  BlockDecomposition d;
  for (auto& nodes : interior) d.blocks.emplace_back(std::move(nodes));
  d.boundary_block = NodeSet(std::move(boundary));
  d.validate(inst.num_nodes());
  return d;
}

std::vector<NodeSet> reclaim(const PottsInstance& inst, const Labeling& g, const NodeSet& remainder) {
  inst.validate_labeling(g);
  std::vector<char> seen(inst.num_nodes(), 0);
  std::vector<NodeSet> out;
  for (NodeId start : remainder) {
    if (seen[start]) continue;
    std::vector<NodeId> component{start};
    seen[start] = 1;
    std::deque<NodeId> queue{start};
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (const Incidence& inc : inst.incident(u)) {
        const NodeId v = inc.neighbor;
        if (seen[v] || g[v] != g[u] || !remainder.contains(v)) continue;
        seen[v] = 1;
        component.push_back(v);
        queue.push_back(v);
      }
    }
    out.emplace_back(std::move(component));
  }
  return out;
}

namespace {

struct BlockOutcome {
  bool stable = false;
  std::vector<NodeId> moved;  // V_delta, parent ids
  std::string failure;
};

using Checker = std::function<std::vector<BlockOutcome>(const BlockDecomposition&, const CertifiedDual&)>;

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double certified_share(const BlockDecomposition& d, int num_nodes) {
  if (num_nodes == 0) return 1.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < d.size(); ++b)
    if (d.status[b] == BlockStatus::kStable) count += d.block(b).size();
  return static_cast<double>(count) / static_cast<double>(num_nodes);
}

FinderReport drive(const PottsInstance& inst, const Labeling& g, const FinderOptions& options, const Checker& check) {
  inst.validate_labeling(g);
  if (options.iterations < 1) throw ModelError("the iteration count must be at least 1");

  FinderReport report;
  report.lp = options.lp_solution ? *options.lp_solution : solve_lp(inst, options.lp);
  const CertifiedDual eta = CertifiedDual::certify(inst, report.lp.dual, report.lp.primal.objective, options.tol);
  report.dual_gap = eta.gap();

  BlockDecomposition decomp = options.seed ? *options.seed : initial_decomposition(inst, g);
  decomp.validate(inst.num_nodes());

  for (int t = 1; t <= options.iterations; ++t) {
    std::erase_if(decomp.blocks, [](const NodeSet& s) { return s.empty(); });
    decomp.status.assign(decomp.size(), BlockStatus::kUntested);

    const std::vector<BlockOutcome> outcomes = check(decomp, eta);
    IterationRecord record;
    for (std::size_t b = 0; b < decomp.size(); ++b) {
      if (decomp.block(b).empty()) continue;
      decomp.status[b] = outcomes[b].stable ? BlockStatus::kStable : BlockStatus::kUnstable;
      if (!outcomes[b].failure.empty())
        report.failures.push_back("iteration " + std::to_string(t) + " block " + std::to_string(b) + ": " +
                                  outcomes[b].failure);
    }
    for (const BlockOutcome& o : outcomes) record.moved.push_back(o.moved.size());
    record.decomposition = decomp;
    record.certified_fraction = certified_share(decomp, inst.num_nodes());
    report.iterations.push_back(std::move(record));
    if (t == options.iterations) break;

    BlockDecomposition next;
    std::vector<NodeId> boundary;
    for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
      const NodeSet moved(outcomes[b].moved);
      next.blocks.push_back(set_difference(decomp.blocks[b], moved));
      boundary.insert(boundary.end(), moved.begin(), moved.end());
    }
    const BlockOutcome& star = outcomes.back();
    boundary.insert(boundary.end(), star.moved.begin(), star.moved.end());
    const NodeSet remainder = set_difference(decomp.boundary_block, NodeSet(star.moved));
    for (NodeSet& block : reclaim(inst, g, remainder)) next.blocks.push_back(std::move(block));
    next.boundary_block = NodeSet(std::move(boundary));
    next.validate(inst.num_nodes());
    decomp = std::move(next);
  }

  report.final_decomposition = report.iterations.back().decomposition;
  const BlockDecomposition& fin = report.final_decomposition;
  report.certified.assign(inst.num_nodes(), false);
  for (std::size_t b = 0; b < fin.size(); ++b) {
    if (fin.block(b).empty()) continue;
    ++report.block_sizes[fin.block(b).size()];
    if (fin.status[b] != BlockStatus::kStable) continue;
    for (NodeId u : fin.block(b)) report.certified[u] = true;
  }
  report.certified_fraction = report.iterations.back().certified_fraction;
  return report;
}

std::vector<NodeId> disagreements(const NodeSet& block, const Labeling& local, const Labeling& g) {
  std::vector<NodeId> out;
  for (std::size_t l = 0; l < block.size(); ++l)
    if (local[l] != g[block[l]]) out.push_back(block[l]);
  return out;
}

std::string describe(const StabilityVerdict& v) {
  return v.proven ? std::string() : std::string("search incomplete (node or size limit)");
}

}  // namespace

FinderReport run(const PottsInstance& inst, const Labeling& g, const FinderOptions& options) {
  HammingOptions search = options.search;
  const unsigned jobs = std::max(1U, search.jobs);
  search.jobs = 1;
  auto check = [&](const BlockDecomposition& decomp, const CertifiedDual& eta) {
    std::vector<BlockOutcome> out(decomp.size());
    parallel_for(decomp.size(), jobs, [&](std::size_t b) {
      const NodeSet& block = decomp.block(b);
      if (block.empty()) return;
      // Block dual for the split (S_b, V \ S_b).
      BlockDecomposition split;
      split.blocks.push_back(block);
      split.boundary_block = set_difference(NodeSet::range(inst.num_nodes()), block);
      split.validate(inst.num_nodes());
      const BlockDualSolution delta = restrict_dual(inst, eta, split);
      const StabilityVerdict v = check_block_stable(inst, split, 0, g, options.beta, options.gamma, delta, search);
      out[b].stable = v.stable;
      if (v.witness) out[b].moved = disagreements(block, *v.witness, g);
      out[b].failure = describe(v);
    });
    return out;
  };
  return drive(inst, g, options, check);
}

FinderReport run_optimized(const PottsInstance& inst, const Labeling& g, const FinderOptions& options) {
  auto check = [&](const BlockDecomposition& decomp, const CertifiedDual& eta) {
    const BlockDualSolution delta = restrict_dual(inst, eta, decomp);
    // (V, E \ E_boundary) with reparametrized costs and one budget per block.
    std::vector<Edge> kept;
    for (std::size_t e = 0; e < inst.num_edges(); ++e)
      if (!delta.contains(e)) kept.push_back(inst.edge(e));
    const PottsInstance merged(inst.num_nodes(), inst.num_labels(), reparametrized_costs(inst, delta),
                               std::move(kept));
    const PottsInstance perturbed = adversarial_perturbation(merged, g, options.beta, options.gamma);
    const std::vector<std::size_t> owner = decomp.block_of(inst.num_nodes());
    const std::vector<int> group(owner.begin(), owner.end());
    const HammingResult r = max_hamming(perturbed, g, group, options.search);

    std::vector<BlockOutcome> out(decomp.size());
    for (const GroupOutcome& o : r.groups) {
      BlockOutcome& bo = out[static_cast<std::size_t>(o.group)];
      bo.stable = o.distance == 0 && o.proven;
      if (!o.proven) bo.failure = "search incomplete (node or size limit)";
      for (NodeId u : decomp.block(static_cast<std::size_t>(o.group)))
        if (r.best[u] != g[u]) bo.moved.push_back(u);
    }
    return out;
  };
  return drive(inst, g, options, check);
}

}  // namespace blockstab
