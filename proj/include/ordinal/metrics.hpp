#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ordinal/pattern.hpp"

namespace ordinal {

class EquivalenceClassTable;

/// Normalized Shannon entropy of the weights, in [0, 1]. 0 log 0 is taken as 0.
double permutation_entropy(const PatternDistribution& dist);

/// Normalized KL divergence D(p || q) / log(n!).
///
/// With alpha > 0 and a sampled q (sample_count M > 0), each q weight is
/// replaced by (count + alpha) / (M + alpha * n!). Exact distributions are
/// never smoothed. Throws SupportError when p puts mass where q has none.
double kl_divergence(const PatternDistribution& p, const PatternDistribution& q, double alpha = 0.0);

/// True when some pattern has p > 0 and q == 0.
bool has_support_gap(const PatternDistribution& p, const PatternDistribution& q);

/// Number of patterns with zero weight.
std::uint64_t missing_pattern_count(const PatternDistribution& dist);

/// Summed absolute deviation of each weight from the mean of its class.
double g_statistic(const PatternDistribution& dist, const EquivalenceClassTable& classes);

enum class Direction { up, down };

/// up:   p(12..n) - p(12)^(n-1)
/// down: p(n..21) - p(21)^(n-1)
double momentum_epsilon(const PatternDistribution& dist_n, const PatternDistribution& dist_2, Direction direction);

/// Where a reported number came from.
struct Provenance {
  std::string model;          // null model description, e.g. "associated(M=1000000)"
  std::uint64_t seed = 0;
  std::string class_source;   // "appendix_data" or "rc_closure"
  double smoothing_alpha = 0.0;
  bool smoothing_applied = false;
};

/// Scalar measures for one order.
struct MetricReport {
  int n = 0;
  std::uint64_t windows = 0;
  double permutation_entropy = 0.0;
  std::uint64_t missing_count = 0;
  std::optional<double> kl_to_model;
  std::optional<double> kl_mean;
  std::optional<double> kl_std;
  std::optional<double> g_statistic;
  std::optional<double> epsilon_up;
  std::optional<double> epsilon_down;
  Provenance provenance;
};

}  // namespace ordinal
