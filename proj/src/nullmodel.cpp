#include "ordinal/nullmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ordinal/error.hpp"
#include "ordinal/metrics.hpp"
#include "ordinal/parallel.hpp"
#include "ordinal/random.hpp"

namespace ordinal {

// --- StepModel --------------------------------------------------------------

StepModel StepModel::uniform_b(double b) {
  StepModel m;
  m.family = Family::uniform_b;
  m.b = b;
  m.validate();
  return m;
}

StepModel StepModel::normal(double mu, double sigma) {
  StepModel m;
  m.family = Family::normal;
  m.mu = mu;
  m.sigma = sigma;
  m.validate();
  return m;
}

StepModel StepModel::empirical(std::vector<double> steps) {
  StepModel m;
  m.family = Family::empirical;
  m.steps = std::move(steps);
  m.validate();
  return m;
}

void StepModel::validate() const {
  switch (family) {
    case Family::uniform_b:
      if (!(b > 0.0 && b < 1.0)) throw RangeError("uniform step parameter b must lie in (0, 1)");
      break;
    case Family::normal:
      if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
        throw RangeError("normal steps need finite mu and sigma > 0");
      }
      break;
    case Family::empirical:
      if (steps.empty()) throw EmptyError("empirical step model needs at least one step");
      for (double s : steps) {
        if (!std::isfinite(s)) throw ValueError("empirical steps must be finite");
      }
      break;
  }
}

std::string StepModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
    case Family::uniform_b: os << "uniform_b(b=" << b << ")"; break;
    case Family::normal: os << "normal(mu=" << mu << ",sigma=" << sigma << ")"; break;
    case Family::empirical: os << "empirical(steps=" << steps.size() << ")"; break;
  }
  return os.str();
}

std::string to_string(StepModel::Family family) {
  switch (family) {
    case StepModel::Family::uniform_b: return "uniform_b";
    case StepModel::Family::normal: return "normal";
    case StepModel::Family::empirical: return "empirical";
  }
  return "uniform_b";
}

std::string to_string(NullMethod method) {
  switch (method) {
    case NullMethod::closed_form: return "closed_form";
    case NullMethod::monte_carlo: return "monte_carlo";
    case NullMethod::quadrature: return "quadrature";
    case NullMethod::associated: return "associated";
    case NullMethod::fixed: return "fixed";
  }
  return "closed_form";
}

// --- closed forms -----------------------------------------------------------

namespace {

using Assignment = std::vector<std::pair<std::vector<const char*>, double>>;

std::vector<double> assign_by_class(int n, const Assignment& rows) {
  std::vector<double> w(factorial(n), -1.0);
  for (const auto& [patterns, value] : rows) {
    for (const char* p : patterns) w[lex_rank(OrdinalPattern::parse(p))] = value;
  }
  return w;
}

// Uniform-step walk on [b-1, b] with b >= 1/2; c = 1 - b is passed separately so
// that the reflected evaluation reuses the caller's exact b.
std::vector<double> uniform_upper(int n, double b, double c) {
  if (n == 2) return {b, c};
  if (n == 3) {
    return assign_by_class(3, {
        {{"123"}, b * b},
        {{"132", "213"}, 0.5 * c * (3.0 * b - 1.0)},
        {{"231", "312"}, 0.5 * c * c},
        {{"321"}, c * c},
    });
  }
  const double c3 = c * c * c;
  const bool low = b <= 2.0 / 3.0;
  const double b2 = b * b;
  const double b3 = b2 * b;
  return assign_by_class(4, {
      {{"1234"}, b * b * b},
      {{"1243", "2134"}, 0.5 * b * c * (3.0 * b - 1.0)},
      {{"1324"}, c * (7.0 * b2 - 5.0 * b + 1.0) / 3.0},
      {{"1342", "3124"}, c * c * (4.0 * b - 1.0) / 6.0},
      {{"1423", "2314"}, c * c * (5.0 * b - 2.0) / 6.0},
      {{"1432", "2143", "3214"}, low ? (2.0 - 12.0 * b + 24.0 * b2 - 15.0 * b3) / 6.0 : c * c * (2.0 * b - 1.0)},
      {{"2341", "3412", "4123"}, c3 / 6.0},
      {{"2413"}, c3 / 6.0},
      {{"2431", "4213"}, low ? (24.0 * b3 - 45.0 * b2 + 27.0 * b - 5.0) / 6.0 : c3 / 2.0},
      {{"3142"}, low ? (25.0 * b3 - 48.0 * b2 + 30.0 * b - 6.0) / 6.0 : c3 / 3.0},
      {{"3241", "4132"}, c3 / 6.0},
      {{"3421", "4312"}, c3 / 2.0},
      {{"4231"}, c3 / 3.0},
      {{"4321"}, c * c * c},
  });
}

}  // namespace

PatternDistribution closed_form_uniform(int n, double b) {
  if (n < 2 || n > 4) throw OrderError("closed-form uniform models exist for n = 2, 3, 4");
  if (!(b > 0.0 && b < 1.0)) throw RangeError("b must lie in (0, 1)");
  const double c = 1.0 - b;
  std::vector<double> w;
  if (b >= 0.5) {
    w = uniform_upper(n, b, c);
  } else {
    // Y -> -Y maps b to 1 - b and each pattern to its complement.
    const auto reflected = uniform_upper(n, c, b);
    w.resize(reflected.size());
    for (std::uint64_t r = 0; r < w.size(); ++r) w[r] = reflected[lex_rank(complement(lex_unrank(n, r)))];
  }
  // The formulas can dip below zero by rounding at the ends of the b range.
  for (double& x : w) x = std::max(0.0, x);
  return PatternDistribution::from_weights(n, std::move(w), PatternDistribution::Kind::model, 0);
}

PatternDistribution closed_form_normal_zero_mean(int n) {
  if (n < 2 || n > 4) throw OrderError("closed-form normal models exist for n = 2, 3, 4");
  if (n == 2) return PatternDistribution::from_weights(2, {0.5, 0.5}, PatternDistribution::Kind::model, 0);
  if (n == 3) return closed_form_uniform(3, 0.5);
  auto w = assign_by_class(4, {
      {{"1234"}, 0.1250},
      {{"1243", "2134"}, 0.0625},
      {{"1324"}, 0.0417},
      {{"1342", "3124"}, 0.0355},
      {{"1423", "2314"}, 0.0208},
      {{"1432", "2143", "3214"}, 0.0270},
      {{"2341", "3412", "4123"}, 0.0270},
      {{"2413"}, 0.0146},
      {{"2431", "4213"}, 0.0355},
      {{"3142"}, 0.0146},
      {{"3241", "4132"}, 0.0208},
      {{"3421", "4312"}, 0.0625},
      {{"4231"}, 0.0417},
      {{"4321"}, 0.1250},
  });
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return PatternDistribution::from_weights(4, std::move(w), PatternDistribution::Kind::model, 0);
}

PatternDistribution closed_form(const StepModel& model, int n) {
  model.validate();
  switch (model.family) {
    case StepModel::Family::uniform_b: return closed_form_uniform(n, model.b);
    case StepModel::Family::normal:
      if (model.mu != 0.0) throw SpecError("normal walks with nonzero mean have no closed form here; use Monte Carlo");
      return closed_form_normal_zero_mean(n);
    case StepModel::Family::empirical: break;
  }
  throw SpecError("empirical step models have no closed form; use Monte Carlo");
}

// --- Monte Carlo ------------------------------------------------------------

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

class StepSampler {
 public:
  explicit StepSampler(const StepModel& model)
      : model_(model),
        uniform_(model.b - 1.0, model.b),
        normal_(model.mu, model.sigma),
        pick_(0, model.steps.empty() ? 0 : model.steps.size() - 1) {}

  double operator()(Rng& rng) {
    switch (model_.family) {
      case StepModel::Family::uniform_b: return uniform_(rng);
      case StepModel::Family::normal: return normal_(rng);
      case StepModel::Family::empirical: return model_.steps[pick_(rng)];
    }
    return 0.0;
  }

 private:
  const StepModel& model_;
  std::uniform_real_distribution<double> uniform_;
  std::normal_distribution<double> normal_;
  std::uniform_int_distribution<std::size_t> pick_;
};

}  // namespace

PatternDistribution monte_carlo_distribution(const StepModel& model, int n, std::uint64_t samples,
                                             std::uint64_t seed, int delay) {
  model.validate();
  if (n < 2 || n > kMaxDistributionOrder) throw OrderError("Monte Carlo order must lie in [2, 10]");
  if (samples == 0) throw RangeError("Monte Carlo needs at least one sample");
  if (delay < 1) throw RangeError("delay must be >= 1");

  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> counts(factorial(n), 0);
  std::mutex merge;

  parallel_for(chunks, [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min(samples, begin + kChunk);
    Rng rng = make_rng(seed, chunk);
    StepSampler draw(model);
    std::vector<std::uint64_t> ranks;
    ranks.reserve(end - begin);
    std::array<double, kMaxPatternOrder> z{};
    for (std::uint64_t s = begin; s < end; ++s) {
      double level = 0.0;
      z[0] = 0.0;
      for (int k = 1; k < n; ++k) {
        for (int j = 0; j < delay; ++j) level += draw(rng);
        z[static_cast<std::size_t>(k)] = level;
      }
      ranks.push_back(window_rank(std::span<const double>(z.data(), static_cast<std::size_t>(n))));
    }
    std::lock_guard lock(merge);
    for (auto r : ranks) ++counts[r];
  });
  return PatternDistribution::from_counts(n, counts, PatternDistribution::Kind::model);
}

// --- quadrature oracle ------------------------------------------------------

namespace {

// For each ordering of the first n-1 walk values (as a rank in S_{n-1}) and each
// slot the last value can take among them, the rank of the resulting n-pattern.
std::vector<std::vector<std::uint64_t>> extension_table(int n) {
  const int m = n - 1;
  std::vector<std::vector<std::uint64_t>> table(factorial(m), std::vector<std::uint64_t>(static_cast<std::size_t>(n)));
  for (std::uint64_t r = 0; r < factorial(m); ++r) {
    const auto prefix = m >= 2 ? lex_unrank(m, r).word() : std::vector<int>{1};
    for (int slot = 0; slot < n; ++slot) {
      std::vector<int> word(static_cast<std::size_t>(n));
      for (int i = 0; i < m; ++i) {
        const int v = prefix[static_cast<std::size_t>(i)];
        word[static_cast<std::size_t>(i)] = v <= slot ? v : v + 1;
      }
      word[static_cast<std::size_t>(m)] = slot + 1;
      table[r][static_cast<std::size_t>(slot)] = lex_rank(OrdinalPattern(word));
    }
  }
  return table;
}

std::uint64_t prefix_rank(const std::vector<int>& order_by_value) {
  // order_by_value[p] = index of the value at sorted position p.
  std::vector<int> word(order_by_value.size());
  for (std::size_t p = 0; p < order_by_value.size(); ++p) word[static_cast<std::size_t>(order_by_value[p])] = static_cast<int>(p) + 1;
  if (word.size() < 2) return 0;
  return lex_rank(OrdinalPattern(word));
}

}  // namespace

std::vector<double> volume_oracle_distribution(int n, double b, int resolution) {
  if (n < 2 || n > 5) throw OrderError("the quadrature oracle supports 2 <= n <= 5");
  if (!(b > 0.0 && b < 1.0)) throw RangeError("b must lie in (0, 1)");
  if (resolution < 1) throw RangeError("resolution must be >= 1");

  // Coordinates are scaled by 2R: a cell center is y = (2j + 1) - shift, j in [0, R).
  const auto R = static_cast<std::int64_t>(resolution);
  double shift = 2.0 * static_cast<double>(R) * (1.0 - b);
  if (std::abs(shift - std::round(shift)) < 1e-9) shift = std::round(shift);
  const double eps = 1e-9 * std::max(1.0, shift);

  const int m = n - 1;          // number of prefix values Z_1..Z_{n-1}
  const int free_axes = n - 2;  // axes enumerated explicitly
  const auto table = extension_table(n);
  std::vector<double> mass(factorial(n), 0.0);

  // Adds one unit of mass for the last axis given prefix keys and a strict prefix order.
  auto add_last_axis = [&](const std::vector<double>& keys, const std::vector<int>& order, double weight) {
    const auto pre = prefix_rank(order);
    const auto& slots = table[pre];
    // Z_n > Z_a  iff  u > theta_a, u = 2j + 1.
    std::vector<double> theta(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
      theta[static_cast<std::size_t>(p)] = keys[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] -
                                           keys[static_cast<std::size_t>(m - 1)] + shift;
    }
    auto count_open = [&](double lo, double hi, bool lo_inf, bool hi_inf) -> std::int64_t {
      const std::int64_t jmin = lo_inf ? 0 : static_cast<std::int64_t>(std::floor((lo + eps - 1.0) / 2.0)) + 1;
      const std::int64_t jmax = hi_inf ? R - 1 : static_cast<std::int64_t>(std::ceil((hi - eps - 1.0) / 2.0)) - 1;
      const std::int64_t a = std::max<std::int64_t>(jmin, 0);
      const std::int64_t z = std::min<std::int64_t>(jmax, R - 1);
      return z >= a ? z - a + 1 : 0;
    };
    int p = 0;
    int below = 0;
    double prev = 0.0;
    bool prev_inf = true;
    while (p <= m) {
      if (p == m) {
        mass[slots[static_cast<std::size_t>(below)]] += weight * static_cast<double>(count_open(prev, 0.0, prev_inf, true));
        break;
      }
      const double v = theta[static_cast<std::size_t>(p)];
      int e = 1;
      while (p + e < m && std::abs(theta[static_cast<std::size_t>(p + e)] - v) <= eps) ++e;
      mass[slots[static_cast<std::size_t>(below)]] += weight * static_cast<double>(count_open(prev, v, prev_inf, false));
      const auto j = static_cast<std::int64_t>(std::llround((v - 1.0) / 2.0));
      if (j >= 0 && j < R && std::abs(static_cast<double>(2 * j + 1) - v) <= eps) {
        for (int s = below; s <= below + e; ++s) mass[slots[static_cast<std::size_t>(s)]] += weight / (e + 1);
      }
      below += e;
      p += e;
      prev = v;
      prev_inf = false;
    }
  };

  std::vector<std::int64_t> j(static_cast<std::size_t>(free_axes), 0);
  std::vector<double> keys(static_cast<std::size_t>(m));
  std::vector<int> order(static_cast<std::size_t>(m));
  while (true) {
    keys[0] = 0.0;
    for (int k = 0; k < free_axes; ++k) {
      keys[static_cast<std::size_t>(k + 1)] =
          keys[static_cast<std::size_t>(k)] + static_cast<double>(2 * j[static_cast<std::size_t>(k)] + 1) - shift;
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
      return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(c)] - eps;
    });
    // Tied prefix values: spread the cell evenly over every ordering of each tie group.
    std::vector<std::pair<int, int>> groups;
    for (int p = 0; p < m;) {
      int e = 1;
      while (p + e < m && std::abs(keys[static_cast<std::size_t>(order[static_cast<std::size_t>(p + e)])] -
                                   keys[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])]) <= eps) {
        ++e;
      }
      if (e > 1) groups.emplace_back(p, e);
      p += e;
    }
    if (groups.empty()) {
      add_last_axis(keys, order, 1.0);
    } else {
      double orderings = 1.0;
      for (auto [start, len] : groups) orderings *= static_cast<double>(factorial(len));
      for (auto [start, len] : groups) std::sort(order.begin() + start, order.begin() + start + len);
      bool more = true;
      while (more) {
        add_last_axis(keys, order, 1.0 / orderings);
        more = false;
        for (auto [start, len] : groups) {
          if (std::next_permutation(order.begin() + start, order.begin() + start + len)) {
            more = true;
            break;
          }
        }
      }
    }

    int axis = 0;
    while (axis < free_axes && ++j[static_cast<std::size_t>(axis)] == R) {
      j[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == free_axes) break;
  }

  const double cells = std::pow(static_cast<double>(R), m);
  for (double& x : mass) x /= cells;
  return mass;
}

double volume_oracle(const OrdinalPattern& pattern, const StepModel& model, int resolution) {
  if (model.family != StepModel::Family::uniform_b) throw SpecError("the quadrature oracle covers uniform steps only");
  model.validate();
  return volume_oracle_distribution(pattern.order(), model.b, resolution)[lex_rank(pattern)];
}

// --- associated walks and KL to null ----------------------------------------

std::size_t default_associated_length(std::size_t series_length) {
  return std::max<std::size_t>(1'000'000, 100 * series_length);
}

namespace {

std::vector<double> first_differences(const TimeSeries& series) {
  if (series.size() < 2) throw LengthError("need at least 2 observations to form steps");
  std::vector<double> steps(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) steps[i] = series[i + 1] - series[i];
  return steps;
}

TimeSeries resampled_walk(std::span<const double> steps, std::size_t length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
  std::vector<double> z(length);
  z[0] = 0.0;
  for (std::size_t i = 1; i < length; ++i) z[i] = z[i - 1] + steps[pick(rng)];
  return TimeSeries(std::move(z));
}

}  // namespace

TimeSeries associated_walk(const TimeSeries& series, std::size_t length, std::uint64_t seed) {
  if (length < 2) throw LengthError("associated walk length must be >= 2");
  const auto steps = first_differences(series);
  Rng rng(seed);
  return resampled_walk(steps, length, rng);
}

NullSpec NullSpec::associated(std::uint64_t length) {
  NullSpec s;
  s.kind = Kind::associated;
  s.samples = length;
  return s;
}

NullSpec NullSpec::step_law(StepModel model, std::uint64_t samples) {
  model.validate();
  NullSpec s;
  s.kind = Kind::step_law;
  s.step = std::move(model);
  s.samples = samples;
  return s;
}

NullSpec NullSpec::closed_form(StepModel model) {
  model.validate();
  NullSpec s;
  s.kind = Kind::closed_form;
  s.step = std::move(model);
  return s;
}

NullSpec NullSpec::fixed(PatternDistribution dist) {
  NullSpec s;
  s.kind = Kind::fixed;
  s.distribution = std::move(dist);
  return s;
}

std::string NullSpec::describe() const {
  switch (kind) {
    case Kind::associated:
      return samples == 0 ? "associated(M=default)" : "associated(M=" + std::to_string(samples) + ")";
    case Kind::step_law:
      return "monte_carlo:" + step.describe() + (samples == 0 ? "" : "[m=" + std::to_string(samples) + "]");
    case Kind::closed_form: return "closed_form:" + step.describe();
    case Kind::fixed: return "fixed";
  }
  return "associated";
}

NullModel build_null(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                     const KlOptions& options) {
  switch (spec.kind) {
    case NullSpec::Kind::associated: {
      const std::size_t length = spec.samples == 0 ? default_associated_length(series.size()) : spec.samples;
      auto walk = associated_walk(series, length, derive_seed(seed, 0));
      auto empirical = empirical_distribution(walk, n, options.delay, options.policy);
      auto dist = PatternDistribution::from_weights(
          n, std::vector<double>(empirical.weights().begin(), empirical.weights().end()),
          PatternDistribution::Kind::model, empirical.sample_count());
      return NullModel{StepModel::empirical(first_differences(series)), n, std::move(dist), NullMethod::associated,
                       length, seed, "associated(M=" + std::to_string(length) + ")"};
    }
    case NullSpec::Kind::step_law: {
      const std::uint64_t m =
          spec.samples == 0 ? std::max<std::uint64_t>(1'000'000, 100 * factorial(n)) : spec.samples;
      auto dist = monte_carlo_distribution(spec.step, n, m, seed, options.delay);
      return NullModel{spec.step, n, std::move(dist), NullMethod::monte_carlo, m, seed,
                       "monte_carlo:" + spec.step.describe() + "[m=" + std::to_string(m) + "]"};
    }
    case NullSpec::Kind::closed_form: {
      if (options.delay != 1) throw SpecError("closed-form nulls describe consecutive patterns (delay 1)");
      return NullModel{spec.step, n, closed_form(spec.step, n), NullMethod::closed_form, 0, seed,
                       "closed_form:" + spec.step.describe()};
    }
    case NullSpec::Kind::fixed: {
      if (!spec.distribution) throw SpecError("fixed null spec carries no distribution");
      if (spec.distribution->order() != n) throw OrderMismatch("fixed null order does not match n");
      return NullModel{StepModel{}, n, *spec.distribution, NullMethod::fixed, spec.distribution->sample_count(), seed,
                       "fixed"};
    }
  }
  throw SpecError("unknown null spec");
}

KlResult kl_against(const PatternDistribution& empirical, const NullModel& null, const KlOptions& options) {
  const auto& q = null.distribution;
  const bool sampled = null.method == NullMethod::monte_carlo || null.method == NullMethod::associated;
  const bool smooth = sampled && options.alpha > 0.0 && has_support_gap(empirical, q);
  return KlResult{kl_divergence(empirical, q, smooth ? options.alpha : 0.0), smooth, null};
}

KlResult kl_to_null_detailed(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                             const KlOptions& options) {
  auto p = empirical_distribution(series, n, options.delay, options.policy);
  auto null = build_null(series, n, spec, seed, options);
  return kl_against(p, null, options);
}

double kl_to_null(const TimeSeries& series, int n, const NullSpec& spec, std::uint64_t seed,
                  const KlOptions& options) {
  return kl_to_null_detailed(series, n, spec, seed, options).value;
}

BootstrapBand bootstrap_band(const TimeSeries& series, int n, std::size_t replicates, std::size_t walk_length,
                             std::uint64_t seed, const NullModel& null, const KlOptions& options) {
  if (replicates < 2) throw RangeError("bootstrap needs at least 2 replicates");
  if (null.n != n) throw OrderMismatch("null model order does not match n");
  const std::size_t length = walk_length == 0 ? series.size() : walk_length;
  const auto steps = first_differences(series);

  BootstrapBand band;
  band.samples.assign(replicates, 0.0);
  parallel_for(replicates, [&](std::size_t r) {
    Rng rng = make_rng(seed, r + 1);
    const auto walk = resampled_walk(steps, length, rng);
    const auto p = empirical_distribution(walk, n, options.delay, options.policy);
    band.samples[r] = kl_against(p, null, options).value;
  });

  const double count = static_cast<double>(replicates);
  band.mean = std::accumulate(band.samples.begin(), band.samples.end(), 0.0) / count;
  double ss = 0.0;
  for (double v : band.samples) ss += (v - band.mean) * (v - band.mean);
  band.std = std::sqrt(ss / (count - 1.0));
  return band;
}

BootstrapBand bootstrap_band(const TimeSeries& series, int n, std::size_t replicates, std::size_t walk_length,
                             std::uint64_t seed, const KlOptions& options) {
  const auto null = build_null(series, n, NullSpec::associated(), seed, options);
  return bootstrap_band(series, n, replicates, walk_length, seed, null, options);
}

}  // namespace ordinal
