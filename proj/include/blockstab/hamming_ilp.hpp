#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockstab/exact.hpp"
#include "blockstab/model.hpp"

namespace blockstab {

struct HammingOptions {
  /// Exhaustive search per group when its finite labelings number at most this.
  std::uint64_t exhaustive_limit = 1'000'000;
  std::size_t node_limit = 100'000;  ///< branch-and-bound nodes per group
  Arithmetic arithmetic = Arithmetic::kFloat;
  unsigned jobs = 1;  ///< groups searched concurrently
  /// Groups with more nodes skip the exact search and report their best
  /// witness unproven; 0 disables the cap.
  std::size_t search_size_limit = 0;
  /// Branch-and-bound nodes for the minimum-energy witness that seeds the search.
  std::size_t witness_node_limit = 50;
  /// MPLP sweeps on the energy dual before trying the stability certificate.
  int certificate_sweeps = 20;
};

struct GroupOutcome {
  int group = 0;
  std::size_t distance = 0;
  bool proven = true;
};

struct HammingResult {
  Labeling best;              ///< a maximizer; equals the reference when nothing moves
  std::size_t distance = 0;   ///< Hamming distance of `best` to the reference
  bool proven = true;         ///< false when a node limit cut the search short
  std::size_t nodes_explored = 0;
  std::vector<GroupOutcome> groups;  ///< ascending group id
};

/// Maximizes the number of nodes where f differs from `reference` subject to
/// Q_G(f) <= Q_G(reference) for every group G, where Q_G counts the node
/// costs of G and the cut weights of edges inside G. Groups are independent,
/// so no edge may join two groups. An empty `group` puts all nodes in one.
HammingResult max_hamming(const PottsInstance& inst, const Labeling& reference, std::span<const int> group,
                          const HammingOptions& options = {});

}  // namespace blockstab
