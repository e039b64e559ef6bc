#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blockstab/exact.hpp"

namespace blockstab::lp {

enum class RowSense { kEqual, kLessEqual, kGreaterEqual };

/// min c^T x  subject to  A x (sense) b,  lower <= x <= upper.
/// A is stored column-major; rows must exist before columns reference them.
template <class T>
class Problem {
 public:
  int add_row(RowSense sense, T rhs) {
    sense_.push_back(sense);
    rhs_.push_back(std::move(rhs));
    return static_cast<int>(rhs_.size()) - 1;
  }

  /// Adds a column; `upper` = nullopt means unbounded above.
  int add_column(T cost, T lower, std::optional<T> upper,
                 std::span<const std::pair<int, T>> entries) {
    for (const auto& [row, value] : entries) {
      if (row < 0 || row >= num_rows()) throw std::out_of_range("column references an unknown row");
      row_index_.push_back(row);
      value_.push_back(value);
    }
    col_start_.push_back(static_cast<int>(row_index_.size()));
    cost_.push_back(std::move(cost));
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return num_cols() - 1;
  }

  void set_cost(int col, T cost) { cost_[col] = std::move(cost); }
  void set_rhs(int row, T rhs) { rhs_[row] = std::move(rhs); }

  int num_rows() const { return static_cast<int>(rhs_.size()); }
  int num_cols() const { return static_cast<int>(cost_.size()); }
  std::size_t num_nonzeros() const { return value_.size(); }

  RowSense sense(int row) const { return sense_[row]; }
  const T& rhs(int row) const { return rhs_[row]; }
  const T& cost(int col) const { return cost_[col]; }
  const T& lower(int col) const { return lower_[col]; }
  const std::optional<T>& upper(int col) const { return upper_[col]; }

  int col_begin(int col) const { return col_start_[col]; }
  int col_end(int col) const { return col_start_[col + 1]; }
  int entry_row(int k) const { return row_index_[k]; }
  const T& entry_value(int k) const { return value_[k]; }

  /// Copy with every number converted by `convert`.
  template <class U, class F>
  Problem<U> convert(F&& convert) const {
    Problem<U> out;
    for (int r = 0; r < num_rows(); ++r) out.add_row(sense_[r], convert(rhs_[r]));
    std::vector<std::pair<int, U>> entries;
    for (int j = 0; j < num_cols(); ++j) {
      entries.clear();
      for (int k = col_begin(j); k < col_end(j); ++k) entries.emplace_back(row_index_[k], convert(value_[k]));
      std::optional<U> up;
      if (upper_[j]) up = convert(*upper_[j]);
      out.add_column(convert(cost_[j]), convert(lower_[j]), up, entries);
    }
    return out;
  }

 private:
  std::vector<RowSense> sense_;
  std::vector<T> rhs_;
  std::vector<T> cost_;
  std::vector<T> lower_;
  std::vector<std::optional<T>> upper_;
  std::vector<int> col_start_{0};
  std::vector<int> row_index_;
  std::vector<T> value_;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(Status status);

template <class T>
struct Solution {
  Status status = Status::kIterationLimit;
  T objective{};
  std::vector<T> x;              ///< structural columns
  std::vector<T> row_duals;      ///< y with reduced costs d = c - A^T y
  std::vector<T> reduced_costs;  ///< structural columns
  std::vector<bool> basic;       ///< structural columns in the final basis
  std::size_t iterations = 0;
  /// Some nonbasic, non-fixed column has a zero reduced cost, so the optimum
  /// may not be unique. When false the primal optimum is unique.
  bool dual_degenerate = false;
};

struct Options {
  std::size_t max_iterations = 0;  ///< 0 = automatic
  int refactor_interval = 100;
  int bland_after_degenerate = 1000;  ///< consecutive degenerate pivots before Bland's rule
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
};

/// Starting basis for the double-precision solver. head[r] names the
/// structural column basic in row r's slot, or -1 for that row's slack
/// (inequality rows) or a zero artificial (equality rows). Nonbasic columns
/// start at their lower bound, or at the upper bound where at_upper is set.
/// A start that is singular or primal infeasible is ignored.
struct StartBasis {
  std::vector<int> head;
  std::vector<char> at_upper;  ///< per structural column; may be empty
};

/// Bounded revised primal simplex, two phases, double precision with a sparse
/// LU basis factorization.
Solution<double> solve(const Problem<double>& problem, const Options& options = {},
                       const StartBasis* start = nullptr);

/// Same algorithm over the rationals; all tolerances are zero.
Solution<Rational> solve(const Problem<Rational>& problem, const Options& options = {});

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blockstab::lp
