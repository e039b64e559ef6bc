#pragma once

#include <optional>

#include "blockstab/dual_decomp.hpp"
#include "blockstab/hamming_ilp.hpp"
#include "blockstab/model.hpp"

namespace blockstab {

/// Outcome of the max-Hamming stability search against a reference labeling g.
struct StabilityVerdict {
  bool stable = false;
  std::optional<Labeling> witness;  ///< f != g with Q*(f) <= Q*(g)
  std::size_t hamming = 0;          ///< disagreements of the witness with g
  double margin = 0.0;              ///< Q*(g) - Q*(witness)
  bool proven = true;               ///< false when the search hit its node limit
  /// The witness beats g under the unperturbed weights, so g is not optimal.
  bool reference_suboptimal = false;
};

/// w*: gamma w on edges cut by g, w / beta elsewhere. Infinite beta gives 0;
/// infinite gamma is only accepted when g cuts no edge of positive weight.
PottsInstance adversarial_perturbation(const PottsInstance& inst, const Labeling& g, double beta, double gamma);

/// Maximizes the Hamming distance to g over labelings with Q*(f) <= Q*(g).
/// Stable iff the maximum is 0 and the search completed.
StabilityVerdict check_stable(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                              const HammingOptions& options = {});

/// check_stable on restricted_instance(inst, S_b, delta) against g restricted
/// to S_b. The witness is indexed like the block's nodes.
StabilityVerdict check_block_stable(const PottsInstance& inst, const BlockDecomposition& decomp, std::size_t block,
                                    const Labeling& g, double beta, double gamma, const BlockDualSolution& delta,
                                    const HammingOptions& options = {});

/// Exhaustive ground truth under w* (delegates to the oracle).
StabilityVerdict brute_force_stable(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                                    Arithmetic arithmetic = Arithmetic::kExact);

/// Fills margin, witness and reference_suboptimal from a max-Hamming result.
StabilityVerdict make_verdict(const PottsInstance& inst, const PottsInstance& perturbed, const Labeling& g,
                              const Labeling& best, std::size_t distance, bool proven, Arithmetic arithmetic);

}  // namespace blockstab
