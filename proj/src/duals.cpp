#include "blockstab/duals.hpp"

#include <algorithm>

namespace blockstab {

Side side_of(const Edge& edge, NodeId node) {
  if (node == edge.u) return Side::kFromU;
  if (node == edge.v) return Side::kFromV;
  throw ModelError("node is not an endpoint of the edge");
}

DualSolution::DualSolution(std::size_t num_edges, int num_labels)
    : num_edges_(num_edges),
      num_labels_(num_labels),
      values_(2 * num_edges * static_cast<std::size_t>(num_labels), 0.0) {}

BlockDualSolution::BlockDualSolution(int num_labels, std::vector<std::size_t> edges)
    : num_labels_(num_labels), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  values_.assign(2 * edges_.size() * static_cast<std::size_t>(num_labels_), 0.0);
}

bool BlockDualSolution::contains(std::size_t edge) const {
  return std::binary_search(edges_.begin(), edges_.end(), edge);
}

std::size_t BlockDualSolution::position(std::size_t edge) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), edge);
  if (it == edges_.end() || *it != edge) throw ModelError("edge is not keyed in the block dual");
  return static_cast<std::size_t>(it - edges_.begin());
}

std::span<double> BlockDualSolution::message(std::size_t edge, Side side) {
  const std::size_t k = static_cast<std::size_t>(num_labels_);
  return {values_.data() + (2 * position(edge) + static_cast<std::size_t>(side)) * k, k};
}

std::span<const double> BlockDualSolution::message(std::size_t edge, Side side) const {
  const std::size_t k = static_cast<std::size_t>(num_labels_);
  return {values_.data() + (2 * position(edge) + static_cast<std::size_t>(side)) * k, k};
}

}  // namespace blockstab
