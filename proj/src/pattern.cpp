#include "ordinal/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordinal/error.hpp"
#include "ordinal/random.hpp"

namespace ordinal {

namespace {

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
  return f;
}();

void check_order(int n) {
  if (n < 2 || n > kMaxPatternOrder) {
    throw RangeError("pattern order must lie in [2, " + std::to_string(kMaxPatternOrder) + "], got " +
                     std::to_string(n));
  }
}

double jitter_noise(std::uint64_t seed, std::uint64_t index, double scale) {
  const double u = static_cast<double>(mix64(derive_seed(seed, index)) >> 11) * 0x1.0p-53;
  return scale * (2.0 * u - 1.0);
}

// Ranks of n values read through `at`, ties ordered by position. Returns true if any tie was seen.
template <typename At>
bool rank_window(int n, At at, std::array<int, kMaxPatternOrder>& word) {
  bool tied = false;
  for (int i = 0; i < n; ++i) {
    const double xi = at(i);
    int r = 1;
    for (int j = 0; j < n; ++j) {
      const double xj = at(j);
      if (xj < xi || (xj == xi && j < i)) ++r;
      if (j != i && xj == xi) tied = true;
    }
    word[static_cast<std::size_t>(i)] = r;
  }
  return tied;
}

std::uint64_t rank_of_word(int n, const std::array<int, kMaxPatternOrder>& word) {
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t smaller_after = 0;
    for (int j = i + 1; j < n; ++j) {
      if (word[static_cast<std::size_t>(j)] < word[static_cast<std::size_t>(i)]) ++smaller_after;
    }
    rank += smaller_after * kFactorials[static_cast<std::size_t>(n - 1 - i)];
  }
  return rank;
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValueError(std::string(what) + " value at index " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

std::uint64_t factorial(int n) {
  if (n < 0 || n >= static_cast<int>(kFactorials.size())) throw RangeError("factorial argument out of range");
  return kFactorials[static_cast<std::size_t>(n)];
}

// --- TimeSeries -------------------------------------------------------------

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptyError("time series must contain at least one value");
  require_finite(values_, "series");
}

TimeSeries::TimeSeries(std::vector<double> values, std::vector<double> labels) : TimeSeries(std::move(values)) {
  if (labels.size() != values_.size()) {
    throw ValueError("label count " + std::to_string(labels.size()) + " does not match series length " +
                     std::to_string(values_.size()));
  }
  require_finite(labels, "label");
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (!(labels[i] > labels[i - 1])) {
      throw ValueError("labels must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  labels_ = std::move(labels);
}

std::optional<std::span<const double>> TimeSeries::labels() const {
  if (!labels_) return std::nullopt;
  return std::span<const double>(*labels_);
}

TimeSeries TimeSeries::slice(std::size_t start, std::size_t length) const {
  if (length == 0 || start + length > values_.size()) throw LengthError("slice exceeds series bounds");
  std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(start),
                        values_.begin() + static_cast<std::ptrdiff_t>(start + length));
  if (!labels_) return TimeSeries(std::move(v));
  std::vector<double> l(labels_->begin() + static_cast<std::ptrdiff_t>(start),
                        labels_->begin() + static_cast<std::ptrdiff_t>(start + length));
  return TimeSeries(std::move(v), std::move(l));
}

// --- OrdinalPattern ---------------------------------------------------------

OrdinalPattern::OrdinalPattern(std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  check_order(n);
  std::array<bool, kMaxPatternOrder + 1> seen{};
  for (int i = 0; i < n; ++i) {
    const int v = word[static_cast<std::size_t>(i)];
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
      throw RangeError("pattern word is not a permutation of 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(v)] = true;
    word_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  n_ = static_cast<std::uint8_t>(n);
}

OrdinalPattern::OrdinalPattern(std::initializer_list<int> word)
    : OrdinalPattern(std::span<const int>(word.begin(), word.size())) {}

OrdinalPattern OrdinalPattern::identity(int n) {
  check_order(n);
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  return OrdinalPattern(w);
}

OrdinalPattern OrdinalPattern::descending(int n) {
  check_order(n);
  std::vector<int> w(static_cast<std::size_t>(n));
  std::iota(w.rbegin(), w.rend(), 1);
  return OrdinalPattern(w);
}

OrdinalPattern OrdinalPattern::parse(std::string_view text) {
  std::vector<int> w;
  if (text.find('-') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t next = std::min(text.find('-', pos), text.size());
      const auto part = text.substr(pos, next - pos);
      if (part.empty()) throw RangeError("malformed pattern '" + std::string(text) + "'");
      int v = 0;
      for (char c : part) {
        if (c < '0' || c > '9') throw RangeError("malformed pattern '" + std::string(text) + "'");
        v = v * 10 + (c - '0');
      }
      w.push_back(v);
      pos = next + 1;
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw RangeError("malformed pattern '" + std::string(text) + "'");
      w.push_back(c - '0');
    }
  }
  return OrdinalPattern(w);
}

std::vector<int> OrdinalPattern::word() const {
  return std::vector<int>(word_.begin(), word_.begin() + n_);
}

std::string OrdinalPattern::to_string() const {
  std::string s;
  for (int i = 0; i < n_; ++i) {
    if (n_ > 9 && i > 0) s += '-';
    s += std::to_string(word_[static_cast<std::size_t>(i)]);
  }
  return s;
}

std::uint64_t lex_rank(const OrdinalPattern& pattern) {
  std::array<int, kMaxPatternOrder> w{};
  for (int i = 0; i < pattern.order(); ++i) w[static_cast<std::size_t>(i)] = pattern[i];
  return rank_of_word(pattern.order(), w);
}

OrdinalPattern lex_unrank(int n, std::uint64_t rank) {
  check_order(n);
  if (rank >= factorial(n)) {
    throw RangeError("rank " + std::to_string(rank) + " out of range for order " + std::to_string(n));
  }
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> w;
  w.reserve(pool.size());
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t f = factorial(i);
    const auto idx = static_cast<std::ptrdiff_t>(rank / f);
    rank %= f;
    w.push_back(pool[static_cast<std::size_t>(idx)]);
    pool.erase(pool.begin() + idx);
  }
  return OrdinalPattern(w);
}

OrdinalPattern symmetry_transform(const OrdinalPattern& pattern, Symmetry kind) {
  const int n = pattern.order();
  std::vector<int> w = pattern.word();
  if (kind != Symmetry::reverse) {
    for (int& v : w) v = n + 1 - v;
  }
  if (kind != Symmetry::complement) std::reverse(w.begin(), w.end());
  return OrdinalPattern(w);
}

// --- TiePolicy --------------------------------------------------------------

TiePolicy TiePolicy::jitter(double scale, std::uint64_t seed) {
  TiePolicy p{Mode::jitter, scale, seed};
  p.validate();
  return p;
}

void TiePolicy::validate() const {
  if (!std::isfinite(jitter_scale) || jitter_scale < 0.0) throw RangeError("jitter scale must be finite and >= 0");
  if (mode == Mode::jitter && jitter_scale <= 0.0) throw RangeError("jitter mode needs a positive jitter scale");
}

std::string to_string(TiePolicy::Mode mode) {
  switch (mode) {
    case TiePolicy::Mode::strict: return "strict";
    case TiePolicy::Mode::stable: return "stable";
    case TiePolicy::Mode::jitter: return "jitter";
  }
  return "stable";
}

TiePolicy::Mode parse_tie_mode(std::string_view text) {
  if (text == "strict") return TiePolicy::Mode::strict;
  if (text == "stable") return TiePolicy::Mode::stable;
  if (text == "jitter") return TiePolicy::Mode::jitter;
  throw SpecError("unknown tie policy '" + std::string(text) + "'");
}

// --- extraction -------------------------------------------------------------

OrdinalPattern standardize(std::span<const double> window, const TiePolicy& policy) {
  const int n = static_cast<int>(window.size());
  if (n < 2) throw LengthError("a window needs at least 2 values");
  check_order(n);
  policy.validate();
  require_finite(window, "window");

  std::array<double, kMaxPatternOrder> x{};
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = window[static_cast<std::size_t>(i)];
    if (policy.mode == TiePolicy::Mode::jitter) {
      x[static_cast<std::size_t>(i)] += jitter_noise(policy.seed, static_cast<std::uint64_t>(i), policy.jitter_scale);
    }
  }
  std::array<int, kMaxPatternOrder> word{};
  const bool tied = rank_window(n, [&](int i) { return x[static_cast<std::size_t>(i)]; }, word);
  if (tied && policy.mode == TiePolicy::Mode::strict) throw TieError("window contains equal values");
  return OrdinalPattern(std::span<const int>(word.data(), static_cast<std::size_t>(n)));
}

std::uint64_t window_rank(std::span<const double> window) {
  const int n = static_cast<int>(window.size());
  check_order(n);
  std::array<int, kMaxPatternOrder> word{};
  rank_window(n, [&](int i) { return window[static_cast<std::size_t>(i)]; }, word);
  return rank_of_word(n, word);
}

std::size_t window_count(std::size_t length, int n, int delay) {
  check_order(n);
  if (delay < 1) throw RangeError("delay must be >= 1");
  const std::size_t span = static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(delay) + 1;
  if (length < span) {
    throw LengthError("series of length " + std::to_string(length) + " is too short for order " +
                      std::to_string(n) + " and delay " + std::to_string(delay));
  }
  return length - span + 1;
}

std::vector<std::uint64_t> extract_ranks(const TimeSeries& series, int n, int delay, const TiePolicy& policy) {
  const std::size_t windows = window_count(series.size(), n, delay);
  policy.validate();

  std::span<const double> x = series.values();
  std::vector<double> jittered;
  if (policy.mode == TiePolicy::Mode::jitter) {
    jittered.assign(x.begin(), x.end());
    for (std::size_t i = 0; i < jittered.size(); ++i) jittered[i] += jitter_noise(policy.seed, i, policy.jitter_scale);
    x = jittered;
  }

  std::vector<std::uint64_t> ranks(windows);
  std::array<int, kMaxPatternOrder> word{};
  const auto d = static_cast<std::size_t>(delay);
  for (std::size_t t = 0; t < windows; ++t) {
    const bool tied = rank_window(n, [&](int i) { return x[t + static_cast<std::size_t>(i) * d]; }, word);
    if (tied && policy.mode == TiePolicy::Mode::strict) {
      throw TieError("window starting at index " + std::to_string(t) + " contains equal values");
    }
    ranks[t] = rank_of_word(n, word);
  }
  return ranks;
}

std::vector<OrdinalPattern> extract_patterns(const TimeSeries& series, int n, int delay, const TiePolicy& policy) {
  const auto ranks = extract_ranks(series, n, delay, policy);
  std::vector<OrdinalPattern> out;
  out.reserve(ranks.size());
  for (auto r : ranks) out.push_back(lex_unrank(n, r));
  return out;
}

// --- PatternDistribution ----------------------------------------------------

namespace {
void check_distribution_order(int n) {
  if (n < 2 || n > kMaxDistributionOrder) {
    throw OrderError("distributions are supported for orders 2.." + std::to_string(kMaxDistributionOrder) +
                     ", got " + std::to_string(n));
  }
}
}  // namespace

PatternDistribution PatternDistribution::from_counts(int n, std::span<const std::uint64_t> counts, Kind kind) {
  check_distribution_order(n);
  if (counts.size() != factorial(n)) throw RangeError("count vector must have n! entries");
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw EmptyError("cannot build a distribution from zero observations");
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return PatternDistribution(n, std::move(w), kind, total);
}

PatternDistribution PatternDistribution::from_weights(int n, std::vector<double> weights, Kind kind,
                                                      std::uint64_t sample_count) {
  check_distribution_order(n);
  if (weights.size() != factorial(n)) throw RangeError("weight vector must have n! entries");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValueError("distribution weights must be finite and nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValueError("distribution weights must sum to 1 (got " + std::to_string(sum) + ")");
  return PatternDistribution(n, std::move(weights), kind, sample_count);
}

PatternDistribution PatternDistribution::point_mass(const OrdinalPattern& pattern, Kind kind) {
  const int n = pattern.order();
  check_distribution_order(n);
  std::vector<double> w(factorial(n), 0.0);
  w[lex_rank(pattern)] = 1.0;
  return PatternDistribution(n, std::move(w), kind, 0);
}

PatternDistribution PatternDistribution::uniform(int n) {
  check_distribution_order(n);
  const auto size = factorial(n);
  return PatternDistribution(n, std::vector<double>(size, 1.0 / static_cast<double>(size)), Kind::model, 0);
}

double PatternDistribution::weight(const OrdinalPattern& pattern) const {
  if (pattern.order() != n_) throw OrderMismatch("pattern order does not match distribution order");
  return weights_[lex_rank(pattern)];
}

std::string to_string(PatternDistribution::Kind kind) {
  return kind == PatternDistribution::Kind::empirical ? "empirical" : "model";
}

PatternDistribution empirical_distribution(const TimeSeries& series, int n, int delay, const TiePolicy& policy) {
  check_distribution_order(n);
  const auto ranks = extract_ranks(series, n, delay, policy);
  std::vector<std::uint64_t> counts(factorial(n), 0);
  for (auto r : ranks) ++counts[r];
  return PatternDistribution::from_counts(n, counts, PatternDistribution::Kind::empirical);
}

}  // namespace ordinal
