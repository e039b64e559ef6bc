#pragma once

#include <compare>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "blockstab/model.hpp"

namespace blockstab {

using Rational = mpq_class;

/// How objective values are compared. kExact settles near-ties over the
/// rationals, using the exact binary value of every double in the instance.
enum class Arithmetic { kFloat, kExact };

/// Exact rational value of a finite double.
Rational to_rational(double x);

/// Shortest exact text form, "p/q" or "p".
std::string to_string(const Rational& q);

/// Q(f) over the rationals; nullopt when f uses a forbidden label.
std::optional<Rational> exact_objective(const PottsInstance& inst, const Labeling& f);

/// Upper bound on |Q(f)| for any labeling f with finite value (at least 1).
double objective_scale(const PottsInstance& inst);

/// Relative tie window for double comparisons of objective values.
inline constexpr double kObjectiveTieWindow = 1e-9;

/// Three-way comparison of Q(a) and Q(b), given their double values.
/// Float mode treats values within kObjectiveTieWindow * objective_scale as
/// equal; exact mode recomputes such near-ties over the rationals.
class ObjectiveComparator {
 public:
  ObjectiveComparator(const PottsInstance& inst, Arithmetic mode);

  std::weak_ordering operator()(const Labeling& a, double qa, const Labeling& b, double qb) const;

  Arithmetic mode() const { return mode_; }
  double window() const { return window_; }

 private:
  const PottsInstance* inst_;
  Arithmetic mode_;
  double window_;
};

/// Decides Q(f) <= Q(reference) for a fixed reference labeling.
class ObjectiveBudget {
 public:
  ObjectiveBudget(const PottsInstance& inst, Labeling reference, Arithmetic mode);

  bool admits(const Labeling& f) const;
  bool admits(const Labeling& f, double qf) const;

  double reference_value() const { return reference_value_; }
  /// Q(reference) - Q(f) in double precision.
  double slack(const Labeling& f) const;

 private:
  const PottsInstance* inst_;
  Labeling reference_;
  ObjectiveComparator compare_;
  double reference_value_;
};

}  // namespace blockstab
