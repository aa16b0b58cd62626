#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordinal/pattern.hpp"

namespace ordinal {

/// Law of the i.i.d. steps Y of a random walk.
struct StepModel {
  enum class Family { uniform_b, normal, empirical };

  Family family = Family::uniform_b;
  double b = 0.5;      // uniform_b: Y ~ U[b-1, b], so P(Y > 0) = b
  double mu = 0.0;     // normal
  double sigma = 1.0;  // normal
  std::vector<double> steps;  // empirical: resampled with replacement

  static StepModel uniform_b(double b);
  static StepModel normal(double mu, double sigma);
  static StepModel empirical(std::vector<double> steps);

  void validate() const;
  std::string describe() const;
};

std::string to_string(StepModel::Family family);

enum class NullMethod { closed_form, monte_carlo, quadrature, associated, fixed };
std::string to_string(NullMethod method);

struct NullModel {
  StepModel step_model;
  int n = 0;
  PatternDistribution distribution;
  NullMethod method = NullMethod::closed_form;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::string description;
};

/// Exact pattern probabilities of the uniform-step walk for n = 2, 3, 4 and
/// any b in (0, 1). For b < 1/2 the reflection Y -> -Y is used:
/// P_b(pi) = P_{1-b}(complement(pi)).
PatternDistribution closed_form_uniform(int n, double b);

/// Pattern probabilities of the zero-mean normal walk for n = 2, 3, 4. The
/// n = 4 values are four-decimal constants renormalized to sum to one.
PatternDistribution closed_form_normal_zero_mean(int n);

/// Closed form for a step model where one exists (uniform_b, or normal with mu = 0), n <= 4.
PatternDistribution closed_form(const StepModel& model, int n);

/// Frequencies over m independent walks (0, Y1, Y1+Y2, ...) of (n-1)*delay steps,
/// read at positions 0, delay, 2*delay, ... Deterministic in (model, n, m, seed).
PatternDistribution monte_carlo_distribution(const StepModel& model, int n, std::uint64_t samples,
                                             std::uint64_t seed, int delay = 1);

/// Midpoint-rule estimate of every pattern probability of the uniform-step walk
/// for n <= 5. The cube [b-1, b]^(n-1) is cut into resolution^(n-1) cells; a cell
/// counts for the pattern realized by the partial sums at its center, split evenly
/// over orderings when partial sums tie. The last axis is counted in closed form,
/// so the cost is resolution^(n-2). Error is O(1/resolution).
std::vector<double> volume_oracle_distribution(int n, double b, int resolution);

/// Single-pattern view of volume_oracle_distribution. The model must be uniform_b.
double volume_oracle(const OrdinalPattern& pattern, const StepModel& model, int resolution);

/// Walk of length M started at 0 whose M-1 steps are drawn with replacement
/// from the first differences of `series`.
TimeSeries associated_walk(const TimeSeries& series, std::size_t length, std::uint64_t seed);

/// Default associated-walk length: max(10^6, 100 N).
std::size_t default_associated_length(std::size_t series_length);

/// Which null distribution a series is compared against.
struct NullSpec {
  enum class Kind { associated, step_law, closed_form, fixed };

  Kind kind = Kind::associated;
  std::uint64_t samples = 0;  // associated: walk length M; step_law: Monte Carlo draws; 0 picks the default
  StepModel step;
  std::optional<PatternDistribution> distribution;  // fixed

  static NullSpec associated(std::uint64_t length = 0);
  static NullSpec step_law(StepModel model, std::uint64_t samples = 0);
  static NullSpec closed_form(StepModel model);
  static NullSpec fixed(PatternDistribution dist);

  std::string describe() const;
};

struct KlOptions {
  int delay = 1;
  TiePolicy policy{};
  /// Pseudocount for sampled nulls. It is applied only when the sampled null
  /// leaves a pattern of the series without support.
  double alpha = 1.0;
};

/// Builds the null distribution for `series` at order n.
NullModel build_null(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                     const KlOptions& options = {});

struct KlResult {
  double value = 0.0;
  bool smoothing_applied = false;
  NullModel null;
};

/// D_KL(p || q) where p is the series' empirical distribution and q the null.
KlResult kl_to_null_detailed(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                             const KlOptions& options = {});
double kl_to_null(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                  const KlOptions& options = {});

/// Divergence of an empirical distribution from an already built null, with the
/// on-demand smoothing rule of KlOptions.
KlResult kl_against(const PatternDistribution& empirical, const NullModel& null, const KlOptions& options);

struct BootstrapBand {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  std::vector<double> samples;
};

/// R associated walks of `walk_length` (0 means N), each compared to `null`.
/// Replicate r draws from seed stream r + 1 of `seed`.
BootstrapBand bootstrap_band(const TimeSeries& series, int n, std::size_t replicates, std::size_t walk_length,
                             std::uint64_t seed, const NullModel& null, const KlOptions& options = {});

/// As above against the series' own associated null (built from seed stream 0).
BootstrapBand bootstrap_band(const TimeSeries& series, int n, std::size_t replicates, std::size_t walk_length,
                             std::uint64_t seed, const KlOptions& options = {});

}  // namespace ordinal
