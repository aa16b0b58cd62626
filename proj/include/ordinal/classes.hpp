#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordinal/pattern.hpp"

namespace ordinal {

/// A partition of S_n into groups of patterns that are equally likely under
/// every random walk. Groups hold lexicographic ranks.
class EquivalenceClassTable {
 public:
  enum class Source { appendix_data, rc_closure };

  /// Throws ValueError unless `classes` partitions {0..n!-1} into nonempty,
  /// disjoint, reverse-complement-closed groups.
  EquivalenceClassTable(int n, std::vector<std::vector<std::uint64_t>> classes, Source source);

  int order() const noexcept { return n_; }
  Source source() const noexcept { return source_; }
  std::size_t size() const noexcept { return classes_.size(); }
  const std::vector<std::vector<std::uint64_t>>& classes() const noexcept { return classes_; }
  const std::vector<std::uint64_t>& operator[](std::size_t i) const { return classes_.at(i); }
  /// Index of the class holding the pattern with this rank.
  std::size_t class_of(std::uint64_t rank) const { return class_index_.at(rank); }
  std::size_t class_of(const OrdinalPattern& pattern) const;

  /// True when every class of `this` lies inside a single class of `coarser`.
  bool refines(const EquivalenceClassTable& coarser) const;

 private:
  int n_;
  std::vector<std::vector<std::uint64_t>> classes_;
  std::vector<std::size_t> class_index_;
  Source source_;
};

std::string to_string(EquivalenceClassTable::Source source);

/// Tabulated random-walk equivalence classes for n = 3, 4, 5.
///
/// n = 3 is {123}, {321}, {132, 213}, {231, 312}. At n = 5, 21453 and 31254
/// share a class: they are reverse-complements of each other and so always
/// equally likely.
EquivalenceClassTable equivalence_classes(int n);

/// Orbits of S_n under reverse-complement (sizes 1 or 2), n <= 7. Always a
/// refinement of the full random-walk classes.
EquivalenceClassTable rc_closure(int n);

/// equivalence_classes(n) where tabulated, rc_closure(n) otherwise.
EquivalenceClassTable class_table_for(int n);

struct ClassValidation {
  std::vector<double> spreads;  // max - min weight per class
  double max_spread = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

ClassValidation validate_classes(const PatternDistribution& dist, const EquivalenceClassTable& classes,
                                 double tolerance);

}  // namespace ordinal
