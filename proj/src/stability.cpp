#include "blockstab/stability.hpp"

#include <cmath>

#include "blockstab/oracle.hpp"

namespace blockstab {

PottsInstance adversarial_perturbation(const PottsInstance& inst, const Labeling& g, double beta, double gamma) {
  inst.validate_labeling(g);
  if (!(beta >= 1.0) || !(gamma >= 1.0)) throw ModelError("beta and gamma must be at least 1");
  std::vector<double> weights = inst.weights();
  for (std::size_t e = 0; e < weights.size(); ++e) {
    const Edge& edge = inst.edge(e);
    const double w = weights[e];
    if (w == 0.0) continue;
    if (g[edge.u] != g[edge.v]) {
      if (std::isinf(gamma)) throw ModelError("infinite gamma with an edge cut by the reference labeling");
      weights[e] = gamma * w;
    } else {
      weights[e] = std::isinf(beta) ? 0.0 : w / beta;
    }
  }
  return inst.with_weights(std::move(weights));
}

StabilityVerdict make_verdict(const PottsInstance& inst, const PottsInstance& perturbed, const Labeling& g,
                              const Labeling& best, std::size_t distance, bool proven, Arithmetic arithmetic) {
  StabilityVerdict v;
  v.proven = proven;
  v.hamming = distance;
  v.stable = distance == 0 && proven;
  if (distance > 0) {
    v.witness = best;
    v.margin = objective(perturbed, g) - objective(perturbed, best);
    const ObjectiveComparator compare(inst, arithmetic);
    v.reference_suboptimal =
        compare(best, objective(inst, best), g, objective(inst, g)) == std::weak_ordering::less;
  }
  return v;
}

StabilityVerdict check_stable(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                              const HammingOptions& options) {
  const PottsInstance perturbed = adversarial_perturbation(inst, g, beta, gamma);
  const HammingResult r = max_hamming(perturbed, g, {}, options);
  return make_verdict(inst, perturbed, g, r.best, r.distance, r.proven, options.arithmetic);
}

StabilityVerdict check_block_stable(const PottsInstance& inst, const BlockDecomposition& decomp, std::size_t block,
                                    const Labeling& g, double beta, double gamma, const BlockDualSolution& delta,
                                    const HammingOptions& options) {
  if (block >= decomp.size()) throw ModelError("block index out of range");
  inst.validate_labeling(g);
  const NodeSet& nodes = decomp.block(block);
  if (nodes.empty()) {
    StabilityVerdict v;
    v.stable = true;
    return v;
  }
  const RestrictedInstance sub = restricted_instance(inst, nodes, delta);
  return check_stable(sub.instance, g.restricted_to(nodes), beta, gamma, options);
}

StabilityVerdict brute_force_stable(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                                    Arithmetic arithmetic) {
  return oracle::enumerate_stability(inst, g, beta, gamma, arithmetic);
}

}  // namespace blockstab
