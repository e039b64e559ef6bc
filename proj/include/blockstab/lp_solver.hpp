#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blockstab/duals.hpp"
#include "blockstab/exact.hpp"
#include "blockstab/model.hpp"
#include "blockstab/simplex.hpp"

namespace blockstab {

/// Local-polytope point: node marginals x_u(i) and edge marginals x_uv(i, j).
struct PrimalSolution {
  int num_nodes = 0;
  int num_labels = 0;
  std::size_t num_edges = 0;
  std::vector<double> node_marginals;  ///< n x k, row-major
  std::vector<double> edge_marginals;  ///< m x k x k
  double objective = 0.0;

  double x(NodeId u, Label i) const {
    return node_marginals[static_cast<std::size_t>(u) * num_labels + i];
  }
  double& x(NodeId u, Label i) { return node_marginals[static_cast<std::size_t>(u) * num_labels + i]; }
  double mu(std::size_t e, Label i, Label j) const {
    return edge_marginals[(e * num_labels + i) * num_labels + j];
  }
  double& mu(std::size_t e, Label i, Label j) { return edge_marginals[(e * num_labels + i) * num_labels + j]; }
};

struct LpOptions {
  double big = 0.0;  ///< stand-in for forbidden costs; <= 0 selects default_big
  Arithmetic arithmetic = Arithmetic::kFloat;
  lp::Options simplex;
};

struct LpResult {
  PrimalSolution primal;
  DualSolution dual;
  /// Some optimal reduced cost is zero off the basis; when false the primal
  /// optimum is unique.
  bool dual_degenerate = false;
  std::optional<Rational> exact_objective;  ///< set in exact mode
  std::size_t iterations = 0;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pairwise LP over the local polytope with Potts edge costs w [i != j].
/// Forbidden costs enter as `big`. The dual holds the optimal multipliers
/// of the marginalization rows.
LpResult solve_lp(const PottsInstance& inst, const LpOptions& options = {});

enum class Persistency { kIntegralMatch, kIntegralMismatch, kFractional };

struct PersistencyMask {
  std::vector<Persistency> flags;
  double fraction = 0.0;  ///< share of kIntegralMatch nodes (1 for an empty instance)

  std::size_t count(Persistency p) const;
};

PersistencyMask persistency_mask(const PrimalSolution& x, const Labeling& g, double tol = kTolerance);

struct MapOptions {
  /// Exhaustive enumeration when the number of finite labelings is at most this.
  std::uint64_t exhaustive_limit = 1'000'000;
  std::size_t node_limit = 200'000;
  Arithmetic arithmetic = Arithmetic::kFloat;
};

struct MapResult {
  Labeling labeling;
  double value = 0.0;
  bool proven_optimal = true;
  std::size_t nodes_explored = 0;
};

/// Exact MAP. Ties are broken towards the lexicographically smallest
/// labeling on the exhaustive path; branch and bound keeps the first optimum
/// it proves.
MapResult solve_map(const PottsInstance& inst, const MapOptions& options = {});

}  // namespace blockstab
