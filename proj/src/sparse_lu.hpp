#pragma once

#include <span>
#include <vector>

namespace blockstab::lp {

/// Sparse LU of a square matrix given by columns, with Markowitz pivot
/// selection under threshold partial pivoting. Tuned for simplex bases,
/// which are mostly unit and short columns: triangular parts factor without
/// fill and the solves skip zero entries.
class SparseLu {
 public:
  struct Column {
    std::span<const int> rows;
    std::span<const double> values;
  };

  /// Throws SolverError when the matrix is numerically singular.
  void factor(std::span<const Column> columns);

  /// v <- B^{-1} v, with v indexed by row on entry and by column on exit.
  void solve(std::vector<double>& v) const;
  /// v <- B^{-T} v, with v indexed by column on entry and by row on exit.
  void solve_transposed(std::vector<double>& v) const;

  int size() const { return n_; }

 private:
  struct Entry {
    int index;
    double value;
  };

  int n_ = 0;
  // Pivot k sits at (row pivot_row_[k], column pivot_col_[k]).
  std::vector<int> pivot_row_;
  std::vector<int> pivot_col_;
  std::vector<double> pivot_value_;
  // L: elimination k subtracts multiplier * (pivot row k) from each listed row.
  std::vector<int> l_start_;
  std::vector<Entry> l_entries_;
  // U: off-pivot entries of pivot row k, indexed by column.
  std::vector<int> u_start_;
  std::vector<Entry> u_entries_;
  // Transposed copies for zero-skipping solves: U by column (entries index
  // pivot steps), L by eliminated row (entries index pivot steps).
  std::vector<int> uc_start_;
  std::vector<Entry> uc_entries_;
  std::vector<int> lr_start_;
  std::vector<Entry> lr_entries_;
  mutable std::vector<double> work_;

  void build_transposes();
};

}  // namespace blockstab::lp
