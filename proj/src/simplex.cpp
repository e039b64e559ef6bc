#include "blockstab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparse_lu.hpp"

namespace blockstab::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

double magnitude(double x) { return std::abs(x); }
Rational magnitude(const Rational& x) { return abs(x); }
bool is_zero(double x) { return x == 0.0; }
bool is_zero(const Rational& x) { return sgn(x) == 0; }

// Product-form update E with B_new^{-1} = E B_old^{-1}.
template <class T>
struct Eta {
  int pos = 0;
  T pivot{};
  std::vector<int> index;
  std::vector<T> value;  // alpha entries off the pivot position
};

template <class T>
class EtaFile {
 public:
  void clear() { etas_.clear(); }
  std::size_t size() const { return etas_.size(); }

  void push(int pos, const std::vector<T>& alpha, double drop) {
    Eta<T> eta;
    eta.pos = pos;
    eta.pivot = alpha[pos];
    for (int i = 0; i < static_cast<int>(alpha.size()); ++i) {
      if (i == pos || is_zero(alpha[i])) continue;
      if constexpr (std::is_same_v<T, double>) {
        if (std::abs(alpha[i]) <= drop) continue;
      }
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
    etas_.push_back(std::move(eta));
  }

  void forward(std::vector<T>& v) const {
    for (const Eta<T>& eta : etas_) {
      if (is_zero(v[eta.pos])) continue;
      const T vr = v[eta.pos] / eta.pivot;
      v[eta.pos] = vr;
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * vr;
    }
  }

  void backward(std::vector<T>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      T s = v[it->pos];
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->pos] = s / it->pivot;
    }
  }

 private:
  std::vector<Eta<T>> etas_;
};

// Column-major view of the augmented constraint matrix [A | slacks | artificials].
template <class T>
struct Columns {
  std::vector<int> start{0};
  std::vector<int> row;
  std::vector<T> value;

  int size() const { return static_cast<int>(start.size()) - 1; }
  void push_unit(int r, T v) {
    row.push_back(r);
    value.push_back(std::move(v));
    start.push_back(static_cast<int>(row.size()));
  }
};

class SparseLuFactor {
 public:
  static constexpr bool kExact = false;

  void refactor(const Columns<double>& cols, const std::vector<int>& head) {
    std::vector<SparseLu::Column> basis;
    basis.reserve(head.size());
    for (int j : head) {
      const auto begin = static_cast<std::size_t>(cols.start[j]);
      const auto count = static_cast<std::size_t>(cols.start[j + 1] - cols.start[j]);
      basis.push_back({std::span<const int>(cols.row).subspan(begin, count),
                       std::span<const double>(cols.value).subspan(begin, count)});
    }
    lu_.factor(basis);
    etas_.clear();
  }

  void ftran(std::vector<double>& v) const {
    lu_.solve(v);
    etas_.forward(v);
  }

  void btran(std::vector<double>& v) const {
    etas_.backward(v);
    lu_.solve_transposed(v);
  }

  void update(int pos, const std::vector<double>& alpha) { etas_.push(pos, alpha, 1e-14); }
  std::size_t updates() const { return etas_.size(); }

 private:
  SparseLu lu_;
  EtaFile<double> etas_;
};

// Exact inverse as an eta file on top of a signed identity start basis.
class DiagonalEtaFactor {
 public:
  static constexpr bool kExact = true;

  void refactor(const Columns<Rational>& cols, const std::vector<int>& head) {
    if (etas_.size() != 0) throw SolverError("exact factor cannot be rebuilt after updates");
    diagonal_.assign(head.size(), Rational(0));
    for (std::size_t p = 0; p < head.size(); ++p) {
      const int j = head[p];
      if (cols.start[j + 1] - cols.start[j] != 1 || cols.row[cols.start[j]] != static_cast<int>(p))
        throw SolverError("exact start basis must be diagonal");
      diagonal_[p] = cols.value[cols.start[j]];
    }
  }

  void ftran(std::vector<Rational>& v) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) v[i] /= diagonal_[i];
    etas_.forward(v);
  }

  void btran(std::vector<Rational>& v) const {
    etas_.backward(v);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) v[i] /= diagonal_[i];
  }

  void update(int pos, const std::vector<Rational>& alpha) { etas_.push(pos, alpha, 0.0); }
  std::size_t updates() const { return 0; }

 private:
  std::vector<Rational> diagonal_;
  EtaFile<Rational> etas_;
};

template <class T, class Factor>
class RevisedSimplex {
 public:
  RevisedSimplex(const Problem<T>& problem, const Options& options, const StartBasis* start = nullptr)
      : problem_(problem), options_(options), start_(start) {
    if constexpr (Factor::kExact) {
      feas_ = T(0);
      opt_ = T(0);
      piv_ = T(0);
    } else {
      feas_ = options.feasibility_tol;
      opt_ = options.optimality_tol;
      piv_ = options.pivot_tol;
    }
  }

  Solution<T> run() {
    setup();
    Solution<T> out;
    std::size_t budget = options_.max_iterations;
    if (budget == 0) budget = 200 * static_cast<std::size_t>(m_ + cols_.size()) + 10000;

    if (has_artificials_) {
      std::vector<T> phase_one(cols_.size(), T(0));
      for (int j = 0; j < cols_.size(); ++j)
        if (artificial_[j]) phase_one[j] = T(1);
      Status st = iterate(phase_one, budget, out.iterations);
      if (st == Status::kIterationLimit) {
        out.status = st;
        return out;
      }
      T infeasibility(0);
      T scale(1);
      for (int j = 0; j < cols_.size(); ++j)
        if (artificial_[j]) infeasibility += x_[j];
      for (const T& b : b_) scale = std::max(scale, magnitude(b));
      if (infeasibility > feas_ * scale * T(10)) {
        out.status = Status::kInfeasible;
        return out;
      }
      for (int j = 0; j < cols_.size(); ++j) {
        if (!artificial_[j]) continue;
        upper_[j] = T(0);
        has_upper_[j] = 1;
        if (pos_[j] < 0) {
          x_[j] = T(0);
          at_upper_[j] = 0;
        }
      }
    }

    if constexpr (!Factor::kExact) {
      factor_.refactor(cols_, head_);
      recompute_basic();
    }
    Status st = iterate(cost_, budget, out.iterations);
    out.status = st;
    if (st != Status::kOptimal) return out;
    if constexpr (!Factor::kExact) {
      factor_.refactor(cols_, head_);
      recompute_basic();
    }
    finish(out);
    return out;
  }

 private:
  void setup() {
    m_ = problem_.num_rows();
    n_ = problem_.num_cols();
    b_.resize(m_);
    for (int r = 0; r < m_; ++r) b_[r] = problem_.rhs(r);
    for (int j = 0; j < n_; ++j) {
      for (int k = problem_.col_begin(j); k < problem_.col_end(j); ++k) {
        cols_.row.push_back(problem_.entry_row(k));
        cols_.value.push_back(problem_.entry_value(k));
      }
      cols_.start.push_back(static_cast<int>(cols_.row.size()));
      cost_.push_back(problem_.cost(j));
      lower_.push_back(problem_.lower(j));
      if (problem_.upper(j)) {
        if (*problem_.upper(j) < problem_.lower(j)) throw SolverError("column with upper < lower");
        upper_.push_back(*problem_.upper(j));
        has_upper_.push_back(1);
      } else {
        upper_.push_back(T(0));
        has_upper_.push_back(0);
      }
      artificial_.push_back(0);
      x_.push_back(problem_.lower(j));
      at_upper_.push_back(0);
    }
    bool started = false;
    if constexpr (!Factor::kExact) started = start_ && try_start(*start_);
    if (!started) setup_artificial_start();
    build_rows();
  }

  // Drops every auxiliary column and puts the structurals back at lower bounds.
  void reset_to_structural() {
    cols_.start.resize(n_ + 1);
    cols_.row.resize(cols_.start[n_]);
    cols_.value.resize(cols_.start[n_]);
    for (auto* v : {&cost_, &lower_, &upper_, &x_}) v->resize(n_);
    for (auto* v : {&has_upper_, &artificial_, &at_upper_}) v->resize(n_);
    for (int j = 0; j < n_; ++j) {
      x_[j] = lower_[j];
      at_upper_[j] = 0;
    }
    has_artificials_ = false;
  }

  bool try_start(const StartBasis& start) {
    if (start.head.size() != static_cast<std::size_t>(m_)) return false;
    if (!start.at_upper.empty() && start.at_upper.size() != static_cast<std::size_t>(n_)) return false;
    std::vector<char> used(n_, 0);
    for (int j : start.head) {
      if (j < -1 || j >= n_) return false;
      if (j >= 0 && used[j]++) return false;
    }
    for (int j = 0; j < n_; ++j) {
      if (!start.at_upper.empty() && start.at_upper[j] && has_upper_[j] && !used[j]) {
        at_upper_[j] = 1;
        x_[j] = upper_[j];
      }
    }
    head_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      const RowSense sense = problem_.sense(r);
      int aux = -1;
      if (sense != RowSense::kEqual) aux = add_aux_column(r, sense == RowSense::kLessEqual ? T(1) : T(-1), false);
      if (start.head[r] >= 0) {
        head_[r] = start.head[r];
      } else if (aux >= 0) {
        head_[r] = aux;
      } else {
        const int a = add_aux_column(r, T(1), true);
        has_upper_[a] = 1;  // zero artificial, fixed from the start
        head_[r] = a;
      }
    }
    pos_.assign(cols_.size(), -1);
    for (int r = 0; r < m_; ++r) pos_[head_[r]] = r;
    try {
      factor_.refactor(cols_, head_);
    } catch (const SolverError&) {
      reset_to_structural();
      return false;
    }
    recompute_basic();
    T scale(1);
    for (const T& b : b_) scale = std::max(scale, magnitude(b));
    const T slack = feas_ * scale * T(10);
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (x_[j] < lower_[j] - slack || (has_upper_[j] && x_[j] > upper_[j] + slack)) {
        reset_to_structural();
        return false;
      }
    }
    return true;
  }

  void setup_artificial_start() {
    std::vector<T> residual = b_;
    for (int j = 0; j < n_; ++j) {
      if (is_zero(x_[j])) continue;
      for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) residual[cols_.row[k]] -= cols_.value[k] * x_[j];
    }

    head_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      const RowSense sense = problem_.sense(r);
      const T& res = residual[r];
      if (sense != RowSense::kEqual) {
        const T sign = sense == RowSense::kLessEqual ? T(1) : T(-1);
        const T value = sense == RowSense::kLessEqual ? res : T(-res);
        const int j = add_aux_column(r, sign, false);
        if (value >= T(0)) {
          x_[j] = value;
          head_[r] = j;
          continue;
        }
        x_[j] = T(0);
      }
      const T sign = res >= T(0) ? T(1) : T(-1);
      const int a = add_aux_column(r, sign, true);
      x_[a] = magnitude(res);
      head_[r] = a;
      has_artificials_ = true;
    }
    pos_.assign(cols_.size(), -1);
    for (int r = 0; r < m_; ++r) pos_[head_[r]] = r;
    factor_.refactor(cols_, head_);
  }

  int add_aux_column(int row, T sign, bool artificial) {
    cols_.push_unit(row, sign);
    cost_.push_back(T(0));
    lower_.push_back(T(0));
    upper_.push_back(T(0));
    has_upper_.push_back(0);
    artificial_.push_back(artificial ? 1 : 0);
    x_.push_back(T(0));
    at_upper_.push_back(0);
    return cols_.size() - 1;
  }

  bool fixed(int j) const { return has_upper_[j] && !(lower_[j] < upper_[j]); }

  void recompute_basic() {
    std::vector<T> rhs = b_;
    for (int j = 0; j < cols_.size(); ++j) {
      if (pos_[j] >= 0 || is_zero(x_[j])) continue;
      for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) rhs[cols_.row[k]] -= cols_.value[k] * x_[j];
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  T reduced_cost(const std::vector<T>& c, const std::vector<T>& y, int j) const {
    T d = c[j];
    for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) d -= y[cols_.row[k]] * cols_.value[k];
    return d;
  }

  // Row-wise copy of the augmented matrix, for pivot rows.
  void build_rows() {
    const int total = cols_.size();
    row_start_.assign(m_ + 1, 0);
    for (int r : cols_.row) ++row_start_[r + 1];
    for (int r = 0; r < m_; ++r) row_start_[r + 1] += row_start_[r];
    row_col_.resize(cols_.row.size());
    row_value_.resize(cols_.row.size());
    std::vector<int> fill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < total; ++j) {
      for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
        const int at = fill[cols_.row[k]]++;
        row_col_[at] = j;
        row_value_[at] = cols_.value[k];
      }
    }
    pivot_row_.assign(total, T(0));
    pivot_mark_.assign(total, 0);
  }

  // y = B^{-T} c_B and d = c - A^T y from scratch.
  void compute_duals(const std::vector<T>& c) {
    y_.assign(m_, T(0));
    for (int p = 0; p < m_; ++p) y_[p] = c[head_[p]];
    factor_.btran(y_);
    d_.assign(cols_.size(), T(0));
    for (int j = 0; j < cols_.size(); ++j)
      if (pos_[j] < 0) d_[j] = reduced_cost(c, y_, j);
  }

  bool improving(int j) const {
    return (!at_upper_[j] && d_[j] < -opt_) || (at_upper_[j] && d_[j] > opt_);
  }

  // Entering column, or -1 at optimality. Large problems price a rotating
  // window of columns and take the best candidate of the first window that
  // has one.
  int price(bool bland) {
    const int total = cols_.size();
    if (bland) {
      for (int j = 0; j < total; ++j)
        if (pos_[j] < 0 && !fixed(j) && improving(j)) return j;
      return -1;
    }
    const int window = total > 20000 ? std::max(10000, total / 16) : total;
    for (int scanned = 0; scanned < total;) {
      int best = -1;
      T best_score(0);
      const int lo = price_start_;
      const int hi = std::min(total, lo + window);
      for (int j = lo; j < hi; ++j) {
        if (pos_[j] >= 0 || fixed(j) || !improving(j)) continue;
        const T score = magnitude(d_[j]);
        if (best < 0 || score > best_score) {
          best = j;
          best_score = score;
        }
      }
      scanned += hi - lo;
      price_start_ = hi == total ? 0 : hi;
      if (best >= 0) return best;
    }
    return -1;
  }

  // After the basis change (q enters at position `leave`), update y and d
  // with the pivot row rho^T A, rho = B^{-T} e_leave of the old basis.
  void update_duals(int q, int leave, const T& alpha_q) {
    std::vector<T>& rho = rho_;
    rho.assign(m_, T(0));
    rho[leave] = T(1);
    factor_.btran(rho);
    const T theta = d_[q] / alpha_q;
    touched_.clear();
    for (int r = 0; r < m_; ++r) {
      if (is_zero(rho[r])) continue;
      y_[r] += theta * rho[r];
      for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
        const int j = row_col_[k];
        if (!pivot_mark_[j]) {
          pivot_mark_[j] = 1;
          pivot_row_[j] = T(0);
          touched_.push_back(j);
        }
        pivot_row_[j] += rho[r] * row_value_[k];
      }
    }
    for (int j : touched_) {
      pivot_mark_[j] = 0;
      if (pos_[j] < 0) d_[j] -= theta * pivot_row_[j];
    }
    d_[q] = T(0);
    d_[head_[leave]] = -theta;
  }

  Status iterate(const std::vector<T>& c, std::size_t& budget, std::size_t& iterations) {
    int degenerate = 0;
    bool bland = false;
    std::vector<T> alpha(m_);
    compute_duals(c);
    while (true) {
      if constexpr (!Factor::kExact) {
        if (static_cast<int>(factor_.updates()) >= options_.refactor_interval) {
          factor_.refactor(cols_, head_);
          recompute_basic();
          compute_duals(c);
        }
      }

      const int q = price(bland);
      if (q < 0) {
        if constexpr (!Factor::kExact) {
          // Confirm on fresh duals; incremental updates drift.
          if (factor_.updates() > 0) {
            factor_.refactor(cols_, head_);
            recompute_basic();
            compute_duals(c);
            if (price(false) >= 0) continue;
          }
        }
        return Status::kOptimal;
      }
      if (budget == 0) return Status::kIterationLimit;
      --budget;
      ++iterations;

      std::fill(alpha.begin(), alpha.end(), T(0));
      for (int k = cols_.start[q]; k < cols_.start[q + 1]; ++k) alpha[cols_.row[k]] = cols_.value[k];
      factor_.ftran(alpha);

      const T dir = at_upper_[q] ? T(-1) : T(1);
      int leave = -1;
      bool leave_to_upper = false;
      T step(0);
      bool have_step = false;
      choose_leaving(alpha, dir, bland, leave, leave_to_upper, step, have_step);

      T flip_range(0);
      const bool can_flip = has_upper_[q];
      if (can_flip) flip_range = upper_[q] - lower_[q];
      if (!have_step && !can_flip) return Status::kUnbounded;

      const bool do_flip = can_flip && (!have_step || flip_range <= step);
      if (do_flip) step = flip_range;
      if (step < T(0)) step = T(0);

      if (!is_zero(step)) {
        for (int p = 0; p < m_; ++p)
          if (!is_zero(alpha[p])) x_[head_[p]] -= dir * step * alpha[p];
      }
      if (do_flip) {
        at_upper_[q] = at_upper_[q] ? 0 : 1;
        x_[q] = at_upper_[q] ? upper_[q] : lower_[q];
      } else {
        x_[q] += dir * step;
        update_duals(q, leave, alpha[leave]);
        const int out = head_[leave];
        x_[out] = leave_to_upper ? upper_[out] : lower_[out];
        at_upper_[out] = leave_to_upper ? 1 : 0;
        pos_[out] = -1;
        head_[leave] = q;
        pos_[q] = leave;
        factor_.update(leave, alpha);
      }

      if (step <= feas_) {
        if (++degenerate >= options_.bland_after_degenerate) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
  }

  void choose_leaving(const std::vector<T>& alpha, const T& dir, bool bland, int& leave,
                      bool& leave_to_upper, T& step, bool& have_step) {
    // Rate of change of basic variable p per unit step is -dir * alpha[p].
    if constexpr (Factor::kExact) {
      bland = true;
    }
    T piv = piv_;
    if constexpr (!Factor::kExact) {
      T largest(0);
      for (const T& a : alpha) largest = std::max(largest, magnitude(a));
      piv = std::max(piv_, T(1e-9) * largest);
    }
    if (bland) {
      for (int p = 0; p < m_; ++p) {
        if (magnitude(alpha[p]) <= piv) continue;
        const int j = head_[p];
        const T rate = -dir * alpha[p];
        T t;
        bool to_upper = false;
        if (rate < T(0)) {
          t = (x_[j] - lower_[j]) / -rate;
        } else if (has_upper_[j]) {
          t = (upper_[j] - x_[j]) / rate;
          to_upper = true;
        } else {
          continue;
        }
        if (t < T(0)) t = T(0);
        bool better = !have_step || t < step - feas_;
        if (!better && have_step && !(t > step + feas_) && j < head_[leave]) better = true;
        if (better) {
          have_step = true;
          step = t;
          leave = p;
          leave_to_upper = to_upper;
        }
      }
      return;
    }
    // Harris two-pass ratio test.
    T bound_step(0);
    bool any = false;
    for (int p = 0; p < m_; ++p) {
      if (magnitude(alpha[p]) <= piv) continue;
      const int j = head_[p];
      const T rate = -dir * alpha[p];
      T t;
      if (rate < T(0)) {
        t = (x_[j] - lower_[j] + feas_) / -rate;
      } else if (has_upper_[j]) {
        t = (upper_[j] - x_[j] + feas_) / rate;
      } else {
        continue;
      }
      if (!any || t < bound_step) bound_step = t;
      any = true;
    }
    if (!any) return;
    T best_pivot(0);
    for (int p = 0; p < m_; ++p) {
      if (magnitude(alpha[p]) <= piv) continue;
      const int j = head_[p];
      const T rate = -dir * alpha[p];
      T t;
      bool to_upper = false;
      if (rate < T(0)) {
        t = (x_[j] - lower_[j]) / -rate;
      } else if (has_upper_[j]) {
        t = (upper_[j] - x_[j]) / rate;
        to_upper = true;
      } else {
        continue;
      }
      if (t <= bound_step && magnitude(alpha[p]) > best_pivot) {
        best_pivot = magnitude(alpha[p]);
        leave = p;
        leave_to_upper = to_upper;
        step = t;
        have_step = true;
      }
    }
  }

  void finish(Solution<T>& out) {
    std::vector<T> y(m_);
    for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
    factor_.btran(y);
    out.row_duals = y;
    out.x.assign(x_.begin(), x_.begin() + n_);
    out.reduced_costs.resize(n_);
    out.basic.assign(n_, false);
    out.objective = T(0);
    for (int j = 0; j < n_; ++j) {
      out.objective += cost_[j] * x_[j];
      out.reduced_costs[j] = reduced_cost(cost_, y, j);
      out.basic[j] = pos_[j] >= 0;
    }
    out.dual_degenerate = false;
    for (int j = 0; j < cols_.size(); ++j) {
      if (pos_[j] >= 0 || fixed(j) || artificial_[j]) continue;
      if (magnitude(reduced_cost(cost_, y, j)) <= opt_) {
        out.dual_degenerate = true;
        break;
      }
    }
  }

  const Problem<T>& problem_;
  Options options_;
  const StartBasis* start_ = nullptr;
  T feas_{}, opt_{}, piv_{};

  int m_ = 0;
  int n_ = 0;
  Columns<T> cols_;
  std::vector<T> b_;
  std::vector<T> cost_, lower_, upper_;
  std::vector<char> has_upper_;
  std::vector<char> artificial_;
  std::vector<T> x_;
  std::vector<char> at_upper_;
  std::vector<int> head_;
  std::vector<int> pos_;
  bool has_artificials_ = false;
  std::vector<T> y_, d_, rho_, pivot_row_;
  int price_start_ = 0;
  std::vector<char> pivot_mark_;
  std::vector<int> touched_;
  std::vector<int> row_start_, row_col_;
  std::vector<T> row_value_;
  Factor factor_;
};

// No constraints: every column sits at its cheaper bound.
template <class T>
Solution<T> solve_unconstrained(const Problem<T>& problem) {
  Solution<T> out;
  out.status = Status::kOptimal;
  out.objective = T(0);
  for (int j = 0; j < problem.num_cols(); ++j) {
    const T& c = problem.cost(j);
    T v = problem.lower(j);
    if (c < T(0)) {
      if (!problem.upper(j)) {
        out.status = Status::kUnbounded;
        return out;
      }
      v = *problem.upper(j);
    }
    out.x.push_back(v);
    out.reduced_costs.push_back(c);
    out.basic.push_back(false);
    out.objective += c * v;
    if (is_zero(c) && problem.upper(j) && problem.lower(j) < *problem.upper(j)) out.dual_degenerate = true;
    if (is_zero(c) && !problem.upper(j)) out.dual_degenerate = true;
  }
  return out;
}

}  // namespace

Solution<double> solve(const Problem<double>& problem, const Options& options, const StartBasis* start) {
  if (problem.num_rows() == 0) return solve_unconstrained(problem);
  if (start) {
    try {
      RevisedSimplex<double, SparseLuFactor> simplex(problem, options, start);
      return simplex.run();
    } catch (const SolverError&) {
      // Numerical trouble on the crash path: retry from the slack start.
    }
  }
  RevisedSimplex<double, SparseLuFactor> simplex(problem, options);
  return simplex.run();
}

Solution<Rational> solve(const Problem<Rational>& problem, const Options& options) {
  if (problem.num_rows() == 0) return solve_unconstrained(problem);
  RevisedSimplex<Rational, DiagonalEtaFactor> simplex(problem, options);
  return simplex.run();
}

}  // namespace blockstab::lp
