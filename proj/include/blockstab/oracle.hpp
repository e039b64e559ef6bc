#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockstab/duals.hpp"
#include "blockstab/exact.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/model.hpp"
#include "blockstab/stability.hpp"

namespace blockstab::oracle {

/// Refusal threshold for exhaustive enumeration.
inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct MapValue {
  Labeling labeling;
  double value = 0.0;
};

/// Global minimum over all k^n labelings in row-major order, first minimum
/// kept. Exact mode compares every candidate over the rationals.
MapValue enumerate_map(const PottsInstance& inst, Arithmetic arithmetic = Arithmetic::kExact,
                       std::uint64_t limit = kEnumerationLimit);

/// Exhaustive stability verdict under the adversarial perturbation. A larger
/// `limit` lets cross-checks enumerate a few tens of millions of labelings.
StabilityVerdict enumerate_stability(const PottsInstance& inst, const Labeling& g, double beta, double gamma,
                                     Arithmetic arithmetic = Arithmetic::kExact,
                                     std::uint64_t limit = kEnumerationLimit);

struct CertificateReport {
  double max_normalization_residual = 0.0;
  double max_marginalization_residual = 0.0;
  double min_entry = 0.0;
  double primal_value = 0.0;  ///< recomputed from x
  double dual_value = 0.0;    ///< P(eta)
  double gap = 0.0;           ///< |primal_value - dual_value|
  /// Nodes where eta decodes to a label whose marginal is below 1 - tol.
  std::vector<NodeId> decoding_violations;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks x against the local polytope, the duality gap to eta, and the
/// decoding consequence of complementary slackness, all within tol.
CertificateReport verify_lp_certificate(const PottsInstance& inst, const PrimalSolution& x, const DualSolution& eta,
                                        double tol = kTolerance);

}  // namespace blockstab::oracle
