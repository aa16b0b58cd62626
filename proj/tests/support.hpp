#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ordinal/pattern.hpp"

namespace testing {

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

/// Small integers, so affine maps with dyadic coefficients stay exact.
inline std::vector<double> random_integers(std::mt19937_64& rng, std::size_t n, int range = 1'000'000) {
  std::uniform_int_distribution<int> u(0, range);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline ordinal::OrdinalPattern random_pattern(std::mt19937_64& rng, int n) {
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  std::shuffle(w.begin(), w.end(), rng);
  return ordinal::OrdinalPattern(w);
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t size, double zero_fraction = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(size);
  for (double& x : w) x = u(rng) < zero_fraction ? 0.0 : u(rng);
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[0] = 1.0;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  // Push the rounding residue onto the largest weight so the sum is 1 to the last bit or two.
  const double residue = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += residue;
  return w;
}

}  // namespace testing
