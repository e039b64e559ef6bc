#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockstab/model.hpp"

namespace blockstab {

/// Direction of a message along an edge e = (u, v), u < v.
/// kFromU holds eta_uv (added to u's costs), kFromV holds eta_vu.
enum class Side : int { kFromU = 0, kFromV = 1 };

/// Side whose message is added to `node`'s costs.
Side side_of(const Edge& edge, NodeId node);

/// Pairwise dual point eta: one k-vector per directed edge endpoint.
class DualSolution {
 public:
  DualSolution() = default;
  DualSolution(std::size_t num_edges, int num_labels);

  std::size_t num_edges() const { return num_edges_; }
  int num_labels() const { return num_labels_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> message(std::size_t edge, Side side) {
    return {values_.data() + offset(edge, side), static_cast<std::size_t>(num_labels_)};
  }
  std::span<const double> message(std::size_t edge, Side side) const {
    return {values_.data() + offset(edge, side), static_cast<std::size_t>(num_labels_)};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  std::size_t offset(std::size_t edge, Side side) const {
    return (2 * edge + static_cast<std::size_t>(side)) * static_cast<std::size_t>(num_labels_);
  }

  std::size_t num_edges_ = 0;
  int num_labels_ = 0;
  std::vector<double> values_;
};

/// Block dual point delta, keyed only by a set of (boundary) edges.
class BlockDualSolution {
 public:
  BlockDualSolution() = default;
  /// Zero messages on the given edges (sorted and deduplicated internally).
  BlockDualSolution(int num_labels, std::vector<std::size_t> edges);

  int num_labels() const { return num_labels_; }
  const std::vector<std::size_t>& edges() const { return edges_; }
  std::size_t size() const { return values_.size(); }
  bool contains(std::size_t edge) const;

  /// Throws ModelError when the edge is not keyed.
  std::span<double> message(std::size_t edge, Side side);
  std::span<const double> message(std::size_t edge, Side side) const;

 private:
  std::size_t position(std::size_t edge) const;

  int num_labels_ = 0;
  std::vector<std::size_t> edges_;
  std::vector<double> values_;
};

}  // namespace blockstab
