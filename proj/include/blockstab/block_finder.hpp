#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blockstab/dual_decomp.hpp"
#include "blockstab/hamming_ilp.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/model.hpp"
#include "blockstab/stability.hpp"

namespace blockstab {

struct FinderOptions {
  double beta = 2.0;
  double gamma = 1.0;
  int iterations = 5;  ///< M, at least 1
  HammingOptions search;  ///< search.jobs sets the per-block concurrency
  LpOptions lp;
  /// Starting decomposition; the label-interior split of g when absent.
  std::optional<BlockDecomposition> seed;
  /// Reuse an LP solution of the same instance instead of solving again.
  const LpResult* lp_solution = nullptr;
  double tol = kTolerance;  ///< relative duality gap accepted when certifying eta
};

struct IterationRecord {
  BlockDecomposition decomposition;  ///< blocks tested in this iteration, with verdict statuses
  std::vector<std::size_t> moved;    ///< sizes of V_delta per block
  double certified_fraction = 0.0;
};

struct FinderReport {
  std::vector<IterationRecord> iterations;
  BlockDecomposition final_decomposition;
  std::vector<bool> certified;  ///< per node: inside a STABLE block of the last iteration
  double certified_fraction = 0.0;
  std::map<std::size_t, std::size_t> block_sizes;  ///< size -> count over final non-empty blocks
  std::vector<std::string> failures;             ///< searches that did not complete, errors
  LpResult lp;
  double dual_gap = 0.0;
};

/// Blocks of nodes whose whole neighborhood shares their label (one per
/// label, possibly empty) and the boundary block of all other nodes.
BlockDecomposition initial_decomposition(const PottsInstance& inst, const Labeling& g);

/// Connected components of R whose nodes share a label of g, ordered by
/// smallest node.
std::vector<NodeSet> reclaim(const PottsInstance& inst, const Labeling& g, const NodeSet& remainder);

/// BlockStable: per-block stability checks on restricted instances built
/// from one certified optimal dual of the pairwise LP.
FinderReport run(const PottsInstance& inst, const Labeling& g, const FinderOptions& options = {});

/// Same iteration with one merged search per iteration: costs reparametrized
/// for all blocks, boundary edges removed, one budget per block.
FinderReport run_optimized(const PottsInstance& inst, const Labeling& g, const FinderOptions& options = {});

}  // namespace blockstab
