#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blockstab/duals.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/model.hpp"

namespace blockstab {

enum class BlockStatus { kUntested, kStable, kUnstable };

/// Partition of V into blocks S_1..S_B plus the boundary block S_*.
/// Block index B (== blocks.size()) denotes S_*.
struct BlockDecomposition {
  std::vector<NodeSet> blocks;
  NodeSet boundary_block;
  std::vector<BlockStatus> status;  ///< one per block, S_* last

  std::size_t size() const { return blocks.size() + 1; }
  const NodeSet& block(std::size_t b) const { return b == blocks.size() ? boundary_block : blocks[b]; }

  /// Block index of every node; throws unless the blocks partition 0..n-1.
  std::vector<std::size_t> block_of(int num_nodes) const;
  /// Fills missing statuses with kUntested and checks the partition.
  void validate(int num_nodes);
};

/// Decomposition with one block S_1 = V.
BlockDecomposition single_block(int num_nodes);
/// Every node its own block, S_* empty.
BlockDecomposition singleton_blocks(int num_nodes);

/// E_boundary: edges whose endpoints lie in different blocks, ascending.
std::vector<std::size_t> boundary_edges(const PottsInstance& inst, const BlockDecomposition& decomp);

/// P(eta) = sum_u min_i (theta_u(i) + sum_v eta_uv(i))
///        + sum_uv min_ij (w [i != j] - eta_uv(i) - eta_vu(j)).
/// Forbidden labels are skipped in the node minima.
double pairwise_dual_value(const PottsInstance& inst, const DualSolution& eta);

/// Edge term min_ij (w [i != j] - a_i - b_j) for messages a (u side), b (v side).
double edge_dual_term(double weight, std::span<const double> a, std::span<const double> b);

/// Sub-LP of one block of the block dual.
struct BlockSubproblem {
  RestrictedInstance restricted;
  std::optional<LpResult> lp;  ///< absent for empty blocks
};

/// Solves the reparametrized sub-LP of every block (S_* last).
std::vector<BlockSubproblem> solve_block_subproblems(const PottsInstance& inst, const BlockDecomposition& decomp,
                                                     const BlockDualSolution& delta, const LpOptions& options = {});

struct BlockDualValue {
  double total = 0.0;
  std::vector<double> block_values;  ///< per block, S_* last; 0 for empty blocks
  double boundary_term = 0.0;
};

/// B(delta): sub-LP values plus the boundary edge terms. delta must be keyed
/// exactly on boundary_edges(decomp).
BlockDualValue block_dual_value(const PottsInstance& inst, const BlockDecomposition& decomp,
                                const BlockDualSolution& delta, const LpOptions& options = {});

class DualError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pairwise dual point whose value matches the LP optimum.
class CertifiedDual {
 public:
  /// Throws DualError when |P(eta) - lp_objective| > tol * max(1, |lp_objective|).
  static CertifiedDual certify(const PottsInstance& inst, DualSolution eta, double lp_objective,
                               double tol = kTolerance);

  const DualSolution& dual() const { return eta_; }
  double value() const { return value_; }
  double gap() const { return gap_; }

 private:
  CertifiedDual(DualSolution eta, double value, double gap) : eta_(std::move(eta)), value_(value), gap_(gap) {}
  DualSolution eta_;
  double value_;
  double gap_;
};

/// delta* = eta* on the boundary edges of the decomposition.
BlockDualSolution restrict_dual(const PottsInstance& inst, const CertifiedDual& eta, const BlockDecomposition& decomp);

/// Stitches delta on boundary edges with per-block duals on internal edges.
/// block_duals[b] is keyed on the local edges of restricted_instance(S_b);
/// empty blocks take an empty DualSolution.
DualSolution extend_dual(const PottsInstance& inst, const BlockDecomposition& decomp, const BlockDualSolution& delta,
                         std::span<const DualSolution> block_duals);

/// Block coordinate ascent on P (MPLP edge updates): each edge moves half of
/// its min-marginal into either endpoint. P never decreases, so an optimal
/// eta stays optimal while ties in the reparametrized node costs are spread
/// out. Stops after `sweeps` passes or once no message moves by more than
/// tol times the objective scale.
DualSolution balance_dual(const PottsInstance& inst, DualSolution eta, int sweeps, double tol = 1e-12);

/// Unique argmin of theta_u + sum_v eta_uv with margin > tol, if any.
std::optional<Label> local_decode(const PottsInstance& inst, const DualSolution& eta, NodeId u,
                                  double tol = kTolerance);

/// eps*_u(i) = sum over boundary edges (u, v) of S of delta_uv(i), for the
/// boundary nodes u of S.
NodeLabelTable epsilon_star(const PottsInstance& inst, const BlockDualSolution& delta, const NodeSet& block);

}  // namespace blockstab
