#include "sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blockstab/simplex.hpp"

namespace blockstab::lp {

namespace {

constexpr double kThreshold = 0.1;  // relative pivot size accepted within a column
constexpr double kSingular = 1e-11;
constexpr int kSearchColumns = 4;
constexpr std::size_t kDenseRow = 32;  // rows longer than this get a position index

}  // namespace

void SparseLu::factor(std::span<const Column> columns) {
  const int n = static_cast<int>(columns.size());
  n_ = n;
  pivot_row_.assign(n, -1);
  pivot_col_.assign(n, -1);
  pivot_value_.assign(n, 0.0);
  l_start_.assign(1, 0);
  l_entries_.clear();
  u_start_.assign(1, 0);
  u_entries_.clear();
  work_.assign(n, 0.0);

  std::vector<std::vector<Entry>> rows(n);
  std::vector<std::vector<int>> col_rows(n);
  std::vector<int> col_count(n, 0);
  for (int c = 0; c < n; ++c) {
    const Column& col = columns[c];
    for (std::size_t t = 0; t < col.rows.size(); ++t) {
      if (col.values[t] == 0.0) continue;
      const int r = col.rows[t];
      if (r < 0 || r >= n) throw SolverError("basis entry outside the matrix");
      rows[r].push_back({c, col.values[t]});
      col_rows[c].push_back(r);
      ++col_count[c];
    }
  }

  std::vector<char> row_done(n, 0), col_done(n, 0);
  std::vector<std::vector<int>> bucket(n + 1);
  for (int c = 0; c < n; ++c) bucket[col_count[c]].push_back(c);
  std::vector<int> row_singletons;
  for (int r = 0; r < n; ++r)
    if (rows[r].size() == 1) row_singletons.push_back(r);
  std::vector<int> mark(n, -1);

  // Long rows (energy budgets) keep column -> position maps so lookups and
  // fill do not scan them.
  std::vector<std::vector<int>> where(n);
  for (int r = 0; r < n; ++r) {
    if (rows[r].size() <= kDenseRow) continue;
    where[r].assign(n, -1);
    for (std::size_t t = 0; t < rows[r].size(); ++t) where[r][rows[r][t].index] = static_cast<int>(t);
  }
  auto find_in_row = [&](int r, int c) -> int {
    if (!where[r].empty()) return where[r][c];
    const auto& row = rows[r];
    for (std::size_t t = 0; t < row.size(); ++t)
      if (row[t].index == c) return static_cast<int>(t);
    return -1;
  };
  auto value_in_row = [&](int r, int c) {
    const int t = find_in_row(r, c);
    return t >= 0 ? rows[r][t].value : 0.0;
  };
  auto column_max = [&](int c) {
    double m = 0.0;
    for (int r : col_rows[c])
      if (!row_done[r]) m = std::max(m, std::abs(value_in_row(r, c)));
    return m;
  };

  int min_count = 0;
  for (int k = 0; k < n; ++k) {
    int pr = -1, pc = -1;

    // Row singletons eliminate their column without fill.
    while (!row_singletons.empty() && pr < 0) {
      const int r = row_singletons.back();
      row_singletons.pop_back();
      if (row_done[r] || rows[r].size() != 1) continue;
      const int c = rows[r][0].index;
      if (std::abs(rows[r][0].value) >= kThreshold * column_max(c)) {
        pr = r;
        pc = c;
      }
    }

    if (pr < 0) {
      // Markowitz search over a few of the sparsest columns.
      long best_cost = std::numeric_limits<long>::max();
      int seen = 0;
      for (int cnt = min_count; cnt <= n && seen < kSearchColumns; ++cnt) {
        auto& list = bucket[cnt];
        for (std::size_t t = 0; t < list.size() && seen < kSearchColumns;) {
          const int c = list[t];
          if (col_done[c] || col_count[c] != cnt) {
            list[t] = list.back();
            list.pop_back();
            continue;
          }
          if (cnt == 0) throw SolverError("singular basis");
          if (seen == 0) min_count = cnt;
          ++seen;
          const double cmax = column_max(c);
          for (int r : col_rows[c]) {
            if (row_done[r]) continue;
            const double a = std::abs(value_in_row(r, c));
            if (a == 0.0 || a < kThreshold * cmax) continue;
            const long cost = static_cast<long>(rows[r].size() - 1) * (cnt - 1);
            if (cost < best_cost) {
              best_cost = cost;
              pr = r;
              pc = c;
            }
          }
          ++t;
        }
      }
      if (pr < 0) throw SolverError("singular basis");
    }

    const double a = value_in_row(pr, pc);
    if (std::abs(a) < kSingular) throw SolverError("singular basis");
    pivot_row_[k] = pr;
    pivot_col_[k] = pc;
    pivot_value_[k] = a;
    row_done[pr] = 1;
    col_done[pc] = 1;

    std::vector<Entry>& prow = rows[pr];
    for (const Entry& e : prow) {
      if (e.index == pc) continue;
      u_entries_.push_back(e);
      const int c = e.index;
      --col_count[c];
      bucket[col_count[c]].push_back(c);
      min_count = std::min(min_count, col_count[c]);
    }
    u_start_.push_back(static_cast<int>(u_entries_.size()));

    for (int i : col_rows[pc]) {
      if (row_done[i]) continue;
      std::vector<Entry>& row = rows[i];
      const int at = find_in_row(i, pc);
      if (at < 0) continue;
      const double l = row[at].value / a;
      std::vector<int>* index = where[i].empty() ? nullptr : &where[i];
      row[at] = row.back();
      row.pop_back();
      if (index) {
        (*index)[pc] = -1;
        if (at < static_cast<int>(row.size())) (*index)[row[at].index] = at;
      } else {
        for (std::size_t t = 0; t < row.size(); ++t) mark[row[t].index] = static_cast<int>(t);
      }
      std::vector<int>& pos = index ? *index : mark;
      l_entries_.push_back({i, l});
      for (const Entry& e : prow) {
        if (e.index == pc) continue;
        if (pos[e.index] >= 0) {
          row[pos[e.index]].value -= l * e.value;
        } else {
          if (index) pos[e.index] = static_cast<int>(row.size());
          row.push_back({e.index, -l * e.value});
          col_rows[e.index].push_back(i);
          // The pivot row's own count was already removed above.
          ++col_count[e.index];
          bucket[col_count[e.index]].push_back(e.index);
        }
      }
      if (!index)
        for (const Entry& e : row) mark[e.index] = -1;
      if (row.size() == 1) row_singletons.push_back(i);
    }
    l_start_.push_back(static_cast<int>(l_entries_.size()));
    prow.clear();
    prow.shrink_to_fit();
  }
  build_transposes();
}

void SparseLu::build_transposes() {
  // step_of_col[c] = pivot step of column c; step_of_row[r] likewise.
  std::vector<int> step_of_col(n_), step_of_row(n_);
  for (int k = 0; k < n_; ++k) {
    step_of_col[pivot_col_[k]] = k;
    step_of_row[pivot_row_[k]] = k;
  }
  uc_start_.assign(n_ + 1, 0);
  for (const Entry& e : u_entries_) ++uc_start_[step_of_col[e.index] + 1];
  for (int k = 0; k < n_; ++k) uc_start_[k + 1] += uc_start_[k];
  uc_entries_.resize(u_entries_.size());
  std::vector<int> fill(uc_start_.begin(), uc_start_.end() - 1);
  for (int k = 0; k < n_; ++k)
    for (int t = u_start_[k]; t < u_start_[k + 1]; ++t)
      uc_entries_[fill[step_of_col[u_entries_[t].index]]++] = {k, u_entries_[t].value};

  lr_start_.assign(n_ + 1, 0);
  for (const Entry& e : l_entries_) ++lr_start_[step_of_row[e.index] + 1];
  for (int k = 0; k < n_; ++k) lr_start_[k + 1] += lr_start_[k];
  lr_entries_.resize(l_entries_.size());
  fill.assign(lr_start_.begin(), lr_start_.end() - 1);
  for (int k = 0; k < n_; ++k)
    for (int t = l_start_[k]; t < l_start_[k + 1]; ++t)
      lr_entries_[fill[step_of_row[l_entries_[t].index]]++] = {k, l_entries_[t].value};
}

void SparseLu::solve(std::vector<double>& v) const {
  for (int k = 0; k < n_; ++k) {
    const double vr = v[pivot_row_[k]];
    if (vr == 0.0) continue;
    for (int t = l_start_[k]; t < l_start_[k + 1]; ++t) v[l_entries_[t].index] -= l_entries_[t].value * vr;
  }
  // Back substitution by columns of U: step k's value feeds earlier steps.
  std::vector<double>& x = work_;
  for (int k = n_ - 1; k >= 0; --k) {
    const double xk = v[pivot_row_[k]] / pivot_value_[k];
    x[pivot_col_[k]] = xk;
    if (xk == 0.0) continue;
    for (int t = uc_start_[k]; t < uc_start_[k + 1]; ++t)
      v[pivot_row_[uc_entries_[t].index]] -= uc_entries_[t].value * xk;
  }
  v.swap(x);
}

void SparseLu::solve_transposed(std::vector<double>& v) const {
  std::vector<double>& w = work_;
  for (int k = 0; k < n_; ++k) {
    const double wk = v[pivot_col_[k]] / pivot_value_[k];
    w[pivot_row_[k]] = wk;
    if (wk == 0.0) continue;
    for (int t = u_start_[k]; t < u_start_[k + 1]; ++t) v[u_entries_[t].index] -= u_entries_[t].value * wk;
  }
  // L^T: a row eliminated at step k contributes to the pivot rows of the
  // earlier steps that eliminated it.
  for (int k = n_ - 1; k >= 0; --k) {
    const double wr = w[pivot_row_[k]];
    if (wr == 0.0) continue;
    for (int t = lr_start_[k]; t < lr_start_[k + 1]; ++t)
      w[pivot_row_[lr_entries_[t].index]] -= lr_entries_[t].value * wr;
  }
  v.swap(w);
}

}  // namespace blockstab::lp
