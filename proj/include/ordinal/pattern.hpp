#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ordinal {

inline constexpr int kMaxPatternOrder = 12;
/// Largest order for which dense n!-sized distributions are built.
inline constexpr int kMaxDistributionOrder = 10;

std::uint64_t factorial(int n);

/// Ordered, finite observations with optional strictly increasing time labels.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);
  TimeSeries(std::vector<double> values, std::vector<double> labels);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  bool has_labels() const noexcept { return labels_.has_value(); }
  std::optional<std::span<const double>> labels() const;
  double operator[](std::size_t i) const { return values_[i]; }

  /// Contiguous sub-series [start, start + length), labels included.
  TimeSeries slice(std::size_t start, std::size_t length) const;

 private:
  std::vector<double> values_;
  std::optional<std::vector<double>> labels_;
};

/// A permutation of {1..n} in one-line notation: word[i] is the rank of the
/// i-th value of the window it was taken from.
class OrdinalPattern {
 public:
  /// Throws RangeError unless `word` is a permutation of {1..n}, 2 <= n <= 12.
  explicit OrdinalPattern(std::span<const int> word);
  OrdinalPattern(std::initializer_list<int> word);

  static OrdinalPattern identity(int n);
  static OrdinalPattern descending(int n);
  /// Parses "2314", or "1-2-10-11-..." for orders above 9.
  static OrdinalPattern parse(std::string_view text);

  int order() const noexcept { return n_; }
  int operator[](int position) const noexcept { return word_[static_cast<std::size_t>(position)]; }
  std::vector<int> word() const;
  std::string to_string() const;

  friend bool operator==(const OrdinalPattern& a, const OrdinalPattern& b) noexcept {
    return a.n_ == b.n_ && a.word_ == b.word_;
  }

 private:
  OrdinalPattern() = default;
  std::array<std::uint8_t, kMaxPatternOrder> word_{};
  std::uint8_t n_ = 0;
};

std::uint64_t lex_rank(const OrdinalPattern& pattern);
OrdinalPattern lex_unrank(int n, std::uint64_t rank);

enum class Symmetry { complement, reverse, reverse_complement };

OrdinalPattern symmetry_transform(const OrdinalPattern& pattern, Symmetry kind);
inline OrdinalPattern complement(const OrdinalPattern& p) { return symmetry_transform(p, Symmetry::complement); }
inline OrdinalPattern reverse(const OrdinalPattern& p) { return symmetry_transform(p, Symmetry::reverse); }
inline OrdinalPattern reverse_complement(const OrdinalPattern& p) {
  return symmetry_transform(p, Symmetry::reverse_complement);
}

/// How equal values inside a window are ordered.
struct TiePolicy {
  enum class Mode { strict, stable, jitter };

  Mode mode = Mode::stable;
  double jitter_scale = 0.0;
  std::uint64_t seed = 0;

  static TiePolicy strict() { return {Mode::strict, 0.0, 0}; }
  static TiePolicy stable() { return {Mode::stable, 0.0, 0}; }
  /// Adds uniform noise in [-scale, scale] keyed on (seed, sample index), then
  /// breaks any remaining ties stably.
  static TiePolicy jitter(double scale, std::uint64_t seed);

  void validate() const;
};

std::string to_string(TiePolicy::Mode mode);
TiePolicy::Mode parse_tie_mode(std::string_view text);

/// Ordinal pattern of one window. Jitter noise is keyed on the position in the window.
OrdinalPattern standardize(std::span<const double> window, const TiePolicy& policy = {});

/// Lexicographic rank of the pattern of `window` under the stable tie policy.
std::uint64_t window_rank(std::span<const double> window);

/// Number of windows a series of length N yields for order n and delay d.
std::size_t window_count(std::size_t length, int n, int delay);

/// Patterns of every window (x_t, x_{t+d}, ..., x_{t+(n-1)d}), t = 0..N-(n-1)d-1.
std::vector<OrdinalPattern> extract_patterns(const TimeSeries& series, int n, int delay = 1,
                                             const TiePolicy& policy = {});

/// Same windows as extract_patterns, reported as lexicographic ranks.
std::vector<std::uint64_t> extract_ranks(const TimeSeries& series, int n, int delay = 1,
                                         const TiePolicy& policy = {});

/// Probability vector over S_n indexed by lexicographic rank.
class PatternDistribution {
 public:
  enum class Kind { empirical, model };

  /// Normalizes integer counts; throws EmptyError when they sum to zero.
  static PatternDistribution from_counts(int n, std::span<const std::uint64_t> counts, Kind kind);
  /// Takes weights as given; they must be nonnegative and sum to 1 within 1e-12.
  static PatternDistribution from_weights(int n, std::vector<double> weights, Kind kind,
                                          std::uint64_t sample_count = 0);
  /// Point mass on one pattern.
  static PatternDistribution point_mass(const OrdinalPattern& pattern, Kind kind);
  static PatternDistribution uniform(int n);

  int order() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  std::uint64_t sample_count() const noexcept { return sample_count_; }
  /// True for sampled distributions; exact closed forms report zero samples.
  bool is_sampled() const noexcept { return sample_count_ > 0; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::uint64_t rank) const { return weights_.at(rank); }
  double weight(const OrdinalPattern& pattern) const;

 private:
  PatternDistribution(int n, std::vector<double> weights, Kind kind, std::uint64_t samples)
      : n_(n), weights_(std::move(weights)), kind_(kind), sample_count_(samples) {}

  int n_ = 0;
  std::vector<double> weights_;
  Kind kind_ = Kind::empirical;
  std::uint64_t sample_count_ = 0;
};

std::string to_string(PatternDistribution::Kind kind);

PatternDistribution empirical_distribution(const TimeSeries& series, int n, int delay = 1,
                                           const TiePolicy& policy = {});

}  // namespace ordinal
