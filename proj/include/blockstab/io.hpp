#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blockstab/block_finder.hpp"
#include "blockstab/duals.hpp"
#include "blockstab/lp_solver.hpp"
#include "blockstab/model.hpp"
#include "blockstab/stability.hpp"

namespace blockstab::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; forbidden costs print as "inf".
std::string format_number(double value);
double parse_number(const std::string& token);

/// POTTS <n> <k> <m>, then n lines of k costs, then m lines "u v w".
void write_instance(std::ostream& out, const PottsInstance& inst);
PottsInstance read_instance(std::istream& in);
void save_instance(const std::string& path, const PottsInstance& inst);
PottsInstance load_instance(const std::string& path);

/// Cost block alone: rows of k tokens, one row per node.
std::vector<std::vector<double>> read_cost_block(std::istream& in);

/// Labels separated by whitespace, 0-indexed.
void write_labeling(std::ostream& out, const Labeling& f);
Labeling read_labeling(std::istream& in);

/// "x u i value", "mu e.u e.v i j value", "objective value". Zero entries are skipped.
void write_primal(std::ostream& out, const PottsInstance& inst, const PrimalSolution& x);
PrimalSolution read_primal(std::istream& in, const PottsInstance& inst);

/// "eta u v i value" for the message from edge (u, v) added to node u.
void write_dual(std::ostream& out, const PottsInstance& inst, const DualSolution& eta);
DualSolution read_dual(std::istream& in, const PottsInstance& inst);
/// Same layout with the "delta" prefix.
void write_block_dual(std::ostream& out, const PottsInstance& inst, const BlockDualSolution& delta);

/// "stable 0|1", "hamming n", and "witness l0 l1 ..." when a witness exists.
void write_verdict(std::ostream& out, const StabilityVerdict& v);

/// "node id block b status S|U" per node (S_* prints as block "*"), then
/// "iteration t certified_fraction f" per iteration.
void write_report(std::ostream& out, const FinderReport& report, int num_nodes);

struct ReportFile {
  std::vector<int> block;     ///< per node; -1 for the boundary block
  std::vector<bool> stable;   ///< per node
  std::vector<std::pair<int, double>> fractions;
};

ReportFile read_report(std::istream& in);

}  // namespace blockstab::io
