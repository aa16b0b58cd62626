#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "ordinal/error.hpp"
#include "ordinal/generators.hpp"
#include "ordinal/metrics.hpp"
#include "ordinal/nullmodel.hpp"
#include "support.hpp"

using namespace ordinal;

namespace {

double w(const PatternDistribution& d, const char* pattern) { return d.weight(OrdinalPattern::parse(pattern)); }

const std::vector<double> kGrid{0.5, 0.52, 0.55, 0.6, 0.65, 2.0 / 3.0, 0.7, 0.75, 0.8, 0.85, 0.9, 0.97};

}  // namespace

TEST_CASE("uniform closed form at b = 1/2 matches the tabulated fractions") {
  const auto d = closed_form_uniform(4, 0.5);
  const std::map<std::string, double> expected{
      {"1234", 1.0 / 8},  {"1243", 1.0 / 16}, {"2134", 1.0 / 16}, {"1324", 1.0 / 24}, {"1342", 1.0 / 24},
      {"3124", 1.0 / 24}, {"1423", 1.0 / 48}, {"2314", 1.0 / 48}, {"1432", 1.0 / 48}, {"2143", 1.0 / 48},
      {"3214", 1.0 / 48}, {"2341", 1.0 / 48}, {"3412", 1.0 / 48}, {"4123", 1.0 / 48}, {"2413", 1.0 / 48},
      {"2431", 1.0 / 24}, {"4213", 1.0 / 24}, {"3142", 1.0 / 48}, {"3241", 1.0 / 48}, {"4132", 1.0 / 48},
      {"3421", 1.0 / 16}, {"4312", 1.0 / 16}, {"4231", 1.0 / 24}, {"4321", 1.0 / 8}};
  REQUIRE(expected.size() == 24);
  for (const auto& [p, v] : expected) CHECK(std::abs(w(d, p.c_str()) - v) <= 1e-12);

  const auto u3 = closed_form_uniform(3, 0.5);
  const auto n3 = closed_form_normal_zero_mean(3);
  for (std::uint64_t r = 0; r < 6; ++r) CHECK(u3.weight(r) == n3.weight(r));
  CHECK(w(n3, "123") == 0.25);
  CHECK(w(n3, "132") == 0.125);
  CHECK(w(n3, "321") == 0.25);
}

TEST_CASE("uniform closed forms: structural properties") {
  for (int n : {2, 3, 4}) {
    for (double b : kGrid) {
      const auto d = closed_form_uniform(n, b);
      double sum = 0.0;
      for (double x : d.weights()) sum += x;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      // The monotone patterns carry b^(n-1) and (1-b)^(n-1).
      CHECK(d.weight(OrdinalPattern::identity(n)) == doctest::Approx(std::pow(b, n - 1)).epsilon(1e-14));
      CHECK(d.weight(OrdinalPattern::descending(n)) == doctest::Approx(std::pow(1.0 - b, n - 1)).epsilon(1e-14));
      for (std::uint64_t r = 0; r < d.size(); ++r) {
        const auto p = lex_unrank(n, r);
        CHECK(d.weight(r) > 0.0);
        CHECK(d.weight(r) == d.weight(reverse_complement(p)));
        if (b == 0.5) CHECK(d.weight(r) == doctest::Approx(d.weight(complement(p))).epsilon(1e-14));
      }
      if (n >= 3) {
        const auto weights = d.weights();
        CHECK(*std::max_element(weights.begin(), weights.end()) > *std::min_element(weights.begin(), weights.end()));
        if (b > 0.5) {
          for (std::uint64_t r = 1; r < d.size(); ++r) CHECK(d.weight(r) < d.weight(std::uint64_t{0}));
        }
      }
    }
  }
}

TEST_CASE("reflection for b below one half") {
  for (int n : {2, 3, 4}) {
    for (double b : {0.05, 0.2, 1.0 / 3.0, 0.45}) {
      const auto low = closed_form_uniform(n, b);
      const auto high = closed_form_uniform(n, 1.0 - b);
      for (std::uint64_t r = 0; r < low.size(); ++r) {
        CHECK(low.weight(r) == doctest::Approx(high.weight(complement(lex_unrank(n, r)))).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("piecewise rows are continuous at b = 2/3") {
  const double b = 2.0 / 3.0;
  const auto below = closed_form_uniform(4, std::nextafter(b, 0.0));
  const auto above = closed_form_uniform(4, std::nextafter(b, 1.0));
  for (std::uint64_t r = 0; r < 24; ++r) CHECK(std::abs(below.weight(r) - above.weight(r)) < 1e-12);
}

TEST_CASE("closed form argument checks") {
  CHECK_THROWS_AS(closed_form_uniform(5, 0.5), OrderError);
  CHECK_THROWS_AS(closed_form_uniform(4, 0.0), RangeError);
  CHECK_THROWS_AS(closed_form_uniform(4, 1.0), RangeError);
  CHECK_THROWS_AS(closed_form_normal_zero_mean(5), OrderError);
  CHECK_THROWS_AS(closed_form(StepModel::normal(0.1, 1.0), 4), SpecError);
  CHECK_THROWS_AS(closed_form(StepModel::empirical({1.0, -1.0}), 4), SpecError);
  CHECK_THROWS_AS(StepModel::normal(0.0, 0.0), RangeError);
  CHECK_THROWS_AS(StepModel::empirical({}), EmptyError);
}

TEST_CASE("normal closed form") {
  const auto d = closed_form_normal_zero_mean(4);
  CHECK(std::abs(w(d, "1234") - 0.1250) < 1e-4);
  CHECK(std::abs(w(d, "2413") - 0.0146) < 1e-4);
  CHECK(std::abs(w(d, "1342") - 0.0355) < 1e-4);
  CHECK(std::abs(w(d, "1423") - 0.0208) < 1e-4);
  CHECK(d.sample_count() == 0);
  for (std::uint64_t r = 0; r < 24; ++r) {
    const auto p = lex_unrank(4, r);
    CHECK(d.weight(r) == d.weight(reverse_complement(p)));
    CHECK(d.weight(r) == d.weight(complement(p)));
  }
  // Scale of the steps does not matter.
  CHECK(closed_form(StepModel::normal(0.0, 7.0), 4).weights()[5] == d.weights()[5]);
}

TEST_CASE("quadrature oracle reproduces the closed forms") {
  CHECK(std::abs(volume_oracle(OrdinalPattern{1, 2, 3}, StepModel::uniform_b(0.7), 2000) - 0.49) <= 0.002);
  CHECK(std::abs(volume_oracle(OrdinalPattern{2, 3, 1}, StepModel::uniform_b(0.5), 2000) - 0.125) <= 0.002);
  for (int n : {3, 4}) {
    for (double b : {0.3, 0.5, 0.55, 0.62, 0.7, 0.78, 0.9}) {
      const auto exact = closed_form_uniform(n, b);
      const auto oracle = volume_oracle_distribution(n, b, 400);
      double sum = 0.0;
      for (std::uint64_t r = 0; r < exact.size(); ++r) {
        CHECK(std::abs(exact.weight(r) - oracle[r]) < 1e-3);
        sum += oracle[r];
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("quadrature oracle at order five") {
  for (double b : {0.5, 0.7}) {
    const auto v = volume_oracle_distribution(5, b, 60);
    double sum = 0.0;
    for (double x : v) sum += x;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(std::abs(v[0] - std::pow(b, 4)) < 0.01);
    for (std::uint64_t r = 0; r < v.size(); ++r) {
      CHECK(std::abs(v[r] - v[lex_rank(reverse_complement(lex_unrank(5, r)))]) < 0.01);
    }
  }
  CHECK_THROWS_AS(volume_oracle_distribution(6, 0.5, 10), OrderError);
  CHECK_THROWS_AS(volume_oracle(OrdinalPattern{1, 2, 3}, StepModel::normal(0, 1), 10), SpecError);
}

TEST_CASE("Monte Carlo distributions") {
  const auto a = monte_carlo_distribution(StepModel::uniform_b(0.65), 4, 1'000'000, 5);
  const auto b = monte_carlo_distribution(StepModel::uniform_b(0.65), 4, 1'000'000, 5);
  CHECK(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
  CHECK(a.sample_count() == 1'000'000);
  CHECK(std::abs(a.weight(std::uint64_t{0}) - 0.274625) < 0.002);
  const auto exact = closed_form_uniform(4, 0.65);
  for (std::uint64_t r = 0; r < 24; ++r) {
    CHECK(std::abs(a.weight(r) - exact.weight(r)) < 4.0 * std::sqrt(exact.weight(r) / 1e6));
  }

  const auto point = monte_carlo_distribution(StepModel::empirical({1.0}), 5, 1000, 1);
  CHECK(point.weight(OrdinalPattern::identity(5)) == 1.0);

  CHECK_THROWS_AS(monte_carlo_distribution(StepModel::uniform_b(0.5), 4, 0, 1), RangeError);
  CHECK_THROWS_AS(monte_carlo_distribution(StepModel::uniform_b(0.5), 11, 10, 1), OrderError);
}

TEST_CASE("Monte Carlo models are rc symmetric and have full support") {
  for (const auto& model : {StepModel::uniform_b(0.6), StepModel::normal(0.0, 1.0), StepModel::normal(0.3, 1.0)}) {
    const std::uint64_t m = 1'000'000;
    const auto d = monte_carlo_distribution(model, 5, m, 77);
    for (std::uint64_t r = 0; r < d.size(); ++r) {
      CHECK(d.weight(r) > 0.0);
      const double q = d.weight(reverse_complement(lex_unrank(5, r)));
      CHECK(std::abs(d.weight(r) - q) <= 4.0 * std::sqrt(std::max(d.weight(r), q) / static_cast<double>(m)));
    }
  }
}

TEST_CASE("Monte Carlo with delay") {
  // A sum of two normal steps is again normal, so the delayed law matches the closed form.
  const auto d = monte_carlo_distribution(StepModel::normal(0.0, 1.0), 4, 1'000'000, 8, 2);
  const auto exact = closed_form_normal_zero_mean(4);
  for (std::uint64_t r = 0; r < 24; ++r) CHECK(std::abs(d.weight(r) - exact.weight(r)) < 0.002);
}

TEST_CASE("associated walks") {
  const TimeSeries ramp({0, 1, 2, 3});
  const auto walk = associated_walk(ramp, 50, 3);
  CHECK(walk.size() == 50);
  for (std::size_t i = 1; i < walk.size(); ++i) CHECK(walk[i] - walk[i - 1] == 1.0);
  CHECK(walk[0] == 0.0);

  std::mt19937_64 rng(9);
  const TimeSeries s(testing::random_integers(rng, 40, 20));
  std::vector<double> observed;
  for (std::size_t i = 1; i < s.size(); ++i) observed.push_back(s[i] - s[i - 1]);
  const auto z = associated_walk(s, 1000, 4);
  for (std::size_t i = 1; i < z.size(); ++i) {
    CHECK(std::find(observed.begin(), observed.end(), z[i] - z[i - 1]) != observed.end());
  }
  CHECK_THROWS_AS(associated_walk(TimeSeries({1.0}), 10, 1), LengthError);
  CHECK_THROWS_AS(associated_walk(s, 1, 1), LengthError);
  CHECK(default_associated_length(100) == 1'000'000);
  CHECK(default_associated_length(20'000) == 2'000'000);
}

TEST_CASE("divergence to a null") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 3000, 21));
  const auto self = NullSpec::fixed(empirical_distribution(walk, 4));
  CHECK(kl_to_null(walk, 4, self, 1) == 0.0);

  const auto closed = NullSpec::closed_form(StepModel::normal(0, 1));
  KlOptions delayed;
  delayed.delay = 2;
  CHECK_THROWS_AS(kl_to_null(walk, 4, closed, 1, delayed), SpecError);
  CHECK(kl_to_null(walk, 4, closed, 1) > 0.0);

  const auto associated = kl_to_null_detailed(walk, 4, NullSpec::associated(200'000), 5);
  CHECK(associated.null.method == NullMethod::associated);
  CHECK(associated.null.sample_count == 200'000);
  CHECK(associated.value > 0.0);
  CHECK(associated.value == kl_to_null(walk, 4, NullSpec::associated(200'000), 5));

  const auto mc = kl_to_null_detailed(walk, 4, NullSpec::step_law(StepModel::normal(0, 1), 100'000), 5);
  CHECK(mc.null.method == NullMethod::monte_carlo);
  CHECK(mc.value < 0.01);

  // Constant steps: the associated walk realizes only 1234, so the divergence is exactly zero.
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 2.0 * static_cast<double>(i);
  const auto flat = kl_to_null_detailed(TimeSeries(ramp), 4, NullSpec::associated(1000), 1);
  CHECK(flat.value == 0.0);
  CHECK_FALSE(flat.smoothing_applied);
}

TEST_CASE("bootstrap band") {
  std::vector<double> ramp(200);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
  const auto flat = bootstrap_band(TimeSeries(ramp), 4, 10, 0, 3);
  CHECK(flat.samples.size() == 10);
  CHECK(flat.mean == 0.0);
  CHECK(flat.std == 0.0);

  const auto walk = generate(GeneratorSpec::walk(StepModel::uniform_b(0.5), 500, 4));
  const auto null = build_null(walk, 4, NullSpec::associated(100'000), 6);
  const auto a = bootstrap_band(walk, 4, 20, 0, 6, null);
  const auto b = bootstrap_band(walk, 4, 20, 0, 6, null);
  CHECK(a.samples == b.samples);
  CHECK(a.std > 0.0);
  CHECK_THROWS_AS(bootstrap_band(walk, 4, 1, 0, 6, null), RangeError);
  CHECK_THROWS_AS(bootstrap_band(walk, 5, 4, 0, 6, null), OrderMismatch);
}
