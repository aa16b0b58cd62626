#include "ordinal/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ordinal/classes.hpp"
#include "ordinal/error.hpp"

namespace ordinal {

namespace {

double log_factorial2(int n) { return std::log2(static_cast<double>(factorial(n))); }

void require_same_order(const PatternDistribution& a, const PatternDistribution& b) {
  if (a.order() != b.order()) {
    throw OrderMismatch("distribution orders differ (" + std::to_string(a.order()) + " vs " +
                        std::to_string(b.order()) + ")");
  }
}

double integer_power(double base, int exponent) {
  double r = base;
  for (int i = 1; i < exponent; ++i) r *= base;
  return exponent == 0 ? 1.0 : r;
}

}  // namespace

double permutation_entropy(const PatternDistribution& dist) {
  double h = 0.0;
  for (double p : dist.weights()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  const double pe = h / log_factorial2(dist.order());
  // Rounding can push a uniform distribution a hair above 1.
  return std::clamp(pe, 0.0, 1.0);
}

bool has_support_gap(const PatternDistribution& p, const PatternDistribution& q) {
  require_same_order(p, q);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weights()[i] > 0.0 && q.weights()[i] == 0.0) return true;
  }
  return false;
}

double kl_divergence(const PatternDistribution& p, const PatternDistribution& q, double alpha) {
  require_same_order(p, q);
  if (!std::isfinite(alpha) || alpha < 0.0) throw RangeError("smoothing pseudocount must be >= 0");

  const bool smooth = alpha > 0.0 && q.is_sampled();
  const double m = static_cast<double>(q.sample_count());
  const double denom = m + alpha * static_cast<double>(q.size());

  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.weights()[i];
    if (pi <= 0.0) continue;
    const double qi = smooth ? (q.weights()[i] * m + alpha) / denom : q.weights()[i];
    if (qi <= 0.0) {
      throw SupportError("pattern " + lex_unrank(p.order(), i).to_string() +
                         " occurs in p but has zero probability under q");
    }
    sum += pi * std::log2(pi / qi);
  }
  return std::max(0.0, sum / log_factorial2(p.order()));
}

std::uint64_t missing_pattern_count(const PatternDistribution& dist) {
  std::uint64_t missing = 0;
  for (double w : dist.weights()) {
    if (w == 0.0) ++missing;
  }
  return missing;
}

double g_statistic(const PatternDistribution& dist, const EquivalenceClassTable& classes) {
  if (dist.order() != classes.order()) throw OrderMismatch("class table order does not match distribution order");
  double g = 0.0;
  for (const auto& group : classes.classes()) {
    double mean = 0.0;
    for (auto r : group) mean += dist.weight(r);
    mean /= static_cast<double>(group.size());
    for (auto r : group) g += std::abs(dist.weight(r) - mean);
  }
  return g;
}

double momentum_epsilon(const PatternDistribution& dist_n, const PatternDistribution& dist_2, Direction direction) {
  if (dist_2.order() != 2) throw OrderMismatch("momentum needs an order-2 reference distribution");
  const int n = dist_n.order();
  if (direction == Direction::up) {
    return dist_n.weight(OrdinalPattern::identity(n)) - integer_power(dist_2.weight(std::uint64_t{0}), n - 1);
  }
  return dist_n.weight(OrdinalPattern::descending(n)) - integer_power(dist_2.weight(std::uint64_t{1}), n - 1);
}

}  // namespace ordinal
