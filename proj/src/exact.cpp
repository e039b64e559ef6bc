#include "blockstab/exact.hpp"

#include <cmath>

namespace blockstab {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ModelError("cannot convert a non-finite value to a rational");
  Rational q(x);  // GMP converts doubles exactly
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::optional<Rational> exact_objective(const PottsInstance& inst, const Labeling& f) {
  inst.validate_labeling(f);
  Rational total = 0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    const double c = inst.cost(u, f[u]);
    if (is_forbidden(c)) return std::nullopt;
    total += to_rational(c);
  }
  for (const Edge& e : inst.edges())
    if (f[e.u] != f[e.v]) total += to_rational(e.weight);
  return total;
}

double objective_scale(const PottsInstance& inst) {
  double s = 1.0;
  for (NodeId u = 0; u < inst.num_nodes(); ++u) {
    double m = 0.0;
    for (double c : inst.costs(u))
      if (!is_forbidden(c)) m = std::max(m, std::abs(c));
    s += m;
  }
  for (const Edge& e : inst.edges()) s += e.weight;
  return s;
}

ObjectiveComparator::ObjectiveComparator(const PottsInstance& inst, Arithmetic mode)
    : inst_(&inst), mode_(mode), window_(kObjectiveTieWindow * objective_scale(inst)) {}

std::weak_ordering ObjectiveComparator::operator()(const Labeling& a, double qa, const Labeling& b,
                                                   double qb) const {
  if (is_forbidden(qa) || is_forbidden(qb)) {
    if (is_forbidden(qa) && is_forbidden(qb)) return std::weak_ordering::equivalent;
    return is_forbidden(qa) ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  if (std::abs(qa - qb) > window_) return qa < qb ? std::weak_ordering::less : std::weak_ordering::greater;
  if (mode_ == Arithmetic::kFloat) return std::weak_ordering::equivalent;
  const Rational ea = *exact_objective(*inst_, a);
  const Rational eb = *exact_objective(*inst_, b);
  const int c = cmp(ea, eb);
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

ObjectiveBudget::ObjectiveBudget(const PottsInstance& inst, Labeling reference, Arithmetic mode)
    : inst_(&inst), reference_(std::move(reference)), compare_(inst, mode),
      reference_value_(objective(inst, reference_)) {}

bool ObjectiveBudget::admits(const Labeling& f) const { return admits(f, objective(*inst_, f)); }

bool ObjectiveBudget::admits(const Labeling& f, double qf) const {
  return compare_(f, qf, reference_, reference_value_) != std::weak_ordering::greater;
}

double ObjectiveBudget::slack(const Labeling& f) const {
  return reference_value_ - objective(*inst_, f);
}

}  // namespace blockstab
