#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ordinal/analysis.hpp"
#include "ordinal/error.hpp"
#include "ordinal/generators.hpp"
#include "ordinal/parallel.hpp"

using namespace ordinal;

namespace {

AnalysisConfig quick(std::vector<int> orders = {4}, std::size_t replicates = 20) {
  AnalysisConfig c;
  c.orders = std::move(orders);
  c.replicates = replicates;
  c.null = NullSpec::associated(200'000);
  c.seed = 7;
  return c;
}

TimeSeries ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.5 * static_cast<double>(i);
  return TimeSeries(v);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("constant increments") {
  const auto report = analyze(ramp(300), quick({3, 4, 5}));
  for (const auto& o : report.orders) {
    const auto& m = o.metrics;
    CHECK(m.permutation_entropy == 0.0);
    CHECK(*m.epsilon_up == 0.0);
    CHECK(m.missing_count == factorial(m.n) - 1);
    CHECK(*m.kl_to_model == 0.0);
    CHECK(*m.kl_mean == 0.0);
    CHECK(*m.kl_std == 0.0);
    CHECK(*m.g_statistic == 0.0);
  }
}

TEST_CASE("random data is further from a walk than a walk") {
  const auto iid = generate(GeneratorSpec::iid_uniform(2000, 31));
  const auto walk = generate(GeneratorSpec::walk(StepModel::uniform_b(0.5), 2000, 31));
  const auto a = analyze(iid, quick({4, 5}, 0));
  const auto b = analyze(walk, quick({4, 5}, 0));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(*a.orders[i].metrics.kl_to_model > *b.orders[i].metrics.kl_to_model);
    CHECK_FALSE(a.orders[i].metrics.kl_mean.has_value());
  }
}

TEST_CASE("a simulated walk lies inside its bootstrap band") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 2000, seed));
    auto config = quick({4}, 400);
    config.seed = seed;
    const auto report = analyze(walk, config);
    const auto& m = report.orders[0].metrics;
    CHECK(std::abs(*m.kl_to_model - *m.kl_mean) <= 3.0 * *m.kl_std);
  }
}

TEST_CASE("report provenance") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 500, 4));
  auto config = quick({4, 6}, 0);
  const auto r = analyze(walk, config);
  CHECK(r.orders[0].metrics.provenance.class_source == "appendix_data");
  CHECK(r.orders[1].metrics.provenance.class_source == "rc_closure");
  CHECK(r.orders[0].metrics.provenance.model == "associated(M=200000)");
  CHECK(r.orders[0].metrics.provenance.seed == 7);
  CHECK(r.orders[0].empirical.size() == 24);
  CHECK(r.orders[0].metrics.windows == 497);

  config.null = NullSpec::closed_form(StepModel::uniform_b(0.5));
  config.orders = {3, 4};
  const auto c = analyze(walk, config);
  CHECK_FALSE(c.orders[1].metrics.provenance.smoothing_applied);
  CHECK(c.orders[1].null[0] == 0.125);
}

TEST_CASE("affine maps leave the report unchanged") {
  // Integer steps keep every partial sum exact, so the comparison can be bitwise.
  const auto base = generate(GeneratorSpec::walk(StepModel::empirical({-2, -1, 1, 3}), 1500, 12));
  std::vector<double> mapped(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) mapped[i] = 3.0 * base[i] + 7.0;
  const auto config = quick({3, 4, 5}, 10);
  const auto a = analyze(base, config);
  const auto b = analyze(TimeSeries(mapped), config);
  for (std::size_t i = 0; i < a.orders.size(); ++i) {
    const auto& x = a.orders[i].metrics;
    const auto& y = b.orders[i].metrics;
    CHECK(x.permutation_entropy == y.permutation_entropy);
    CHECK(x.missing_count == y.missing_count);
    CHECK(*x.kl_to_model == *y.kl_to_model);
    CHECK(*x.kl_mean == *y.kl_mean);
    CHECK(*x.kl_std == *y.kl_std);
    CHECK(*x.g_statistic == *y.g_statistic);
    CHECK(*x.epsilon_up == *y.epsilon_up);
    CHECK(*x.epsilon_down == *y.epsilon_down);
    CHECK(a.orders[i].null == b.orders[i].null);
  }
}

TEST_CASE("windowed analysis") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 100, 5));
  const auto windows = windowed_analyze(walk, {50, 25}, quick({3}, 0));
  REQUIRE(windows.size() == 3);
  CHECK(windows[0].window_start == 1);
  CHECK(windows[1].window_start == 26);
  CHECK(windows[2].window_start == 51);
  CHECK(windows[0].seed == 7);
  CHECK(windows[1].seed == window_seed(7, 1));
  CHECK_THROWS_AS(windowed_analyze(walk, {101, 1}, quick({3}, 0)), LengthError);
  CHECK_THROWS_AS(windowed_analyze(walk, {50, 0}, quick({3}, 0)), RangeError);

  for (const auto& w : windowed_analyze(ramp(400), {100, 30}, quick({4}, 0))) {
    CHECK(*w.orders[0].metrics.kl_to_model == 0.0);
  }
}

TEST_CASE("a single full window reproduces analyze") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::uniform_b(0.6), 800, 9));
  const auto config = quick({4, 5}, 10);
  const auto whole = analyze(walk, config);
  const auto windows = windowed_analyze(walk, {walk.size(), 1}, config);
  REQUIRE(windows.size() == 1);
  CHECK(emit(windows, config, OutputFormat::json) == emit({whole}, config, OutputFormat::json));
}

TEST_CASE("regime change shows up in straddling windows") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const std::size_t half = 10'000;
    const auto first = generate(GeneratorSpec::walk(StepModel::uniform_b(0.5), half, seed));
    const auto second = generate(GeneratorSpec::walk(StepModel::uniform_b(0.8), half + 1, seed + 100));
    std::vector<double> v(first.values().begin(), first.values().end());
    for (std::size_t i = 1; i < second.size(); ++i) v.push_back(first[half - 1] + second[i]);
    auto config = quick({4}, 0);
    config.seed = seed;
    const auto w = windowed_analyze(TimeSeries(v), {5000, 2500}, config);
    REQUIRE(w.size() == 7);
    const auto kl = [&](std::size_t k) { return *w[k].orders[0].metrics.kl_to_model; };
    const auto eps = [&](std::size_t k) { return *w[k].orders[0].metrics.epsilon_up; };
    // Window 3 covers samples 7501..12500 and straddles the change; windows 0 and 6 are pure.
    CHECK(kl(3) > kl(0));
    CHECK(kl(3) > kl(6));
    CHECK(eps(3) > eps(0));
    CHECK(eps(3) > eps(6));
  }
}

TEST_CASE("emission formats") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 300, 2));
  const auto config = quick({3, 4}, 5);
  const std::vector<WindowReport> reports{analyze(walk, config)};

  const auto csv = emit(reports, config, OutputFormat::csv);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "window_start,n,pe,missing,kl,kl_mean,kl_std,g,eps_up,eps_down,seed");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
    CHECK(line.ends_with(",7"));
  }
  CHECK(rows == 2);

  auto three = config;
  three.orders = {3};
  const auto plot = emit({analyze(walk, three)}, three, OutputFormat::plotdata);
  CHECK(count_lines(plot) == 1 + 6);

  const auto json = emit(reports, config, OutputFormat::json);
  const auto back = reports_from_json(json);
  CHECK(emit(back, config, OutputFormat::json) == json);
  CHECK(emit(reports, config, OutputFormat::json) == json);
  CHECK(parse_output_format("plotdata") == OutputFormat::plotdata);
  CHECK_THROWS_AS(parse_output_format("xml"), SpecError);
}

TEST_CASE("config parsing") {
  const auto c = config_from_json(
      R"({"orders": [3, 6], "delay": 2, "replicates": 0, "seed": 99, "alpha": 0.5,
          "tie": {"mode": "jitter", "jitter_scale": 1e-9, "seed": 4},
          "null": {"kind": "uniform", "b": 0.6, "samples": 5000}})");
  CHECK(c.orders == std::vector<int>{3, 6});
  CHECK(c.delay == 2);
  CHECK(c.seed == 99);
  CHECK(c.policy.mode == TiePolicy::Mode::jitter);
  CHECK(c.null.kind == NullSpec::Kind::step_law);
  CHECK(c.null.step.b == 0.6);
  CHECK(config_from_json(config_to_json(c)).null.samples == 5000);

  CHECK_THROWS_AS(config_from_json(R"({"orders": [8]})"), OrderError);
  CHECK_THROWS_AS(config_from_json(R"({"orders": [5], "null": {"kind": "closed_normal"}})"), SpecError);
  CHECK_THROWS_AS(config_from_json(R"({"null": {"kind": "gamma"}})"), SpecError);
  CHECK_THROWS_AS(config_from_json(R"({"replicates": 1})"), RangeError);
  CHECK_THROWS_AS(config_from_json(R"({"orders": )"), ParseError);
  CHECK_THROWS_AS(analyze(TimeSeries({1, 2, 3}), quick({4}, 0)), LengthError);
}

TEST_CASE("results do not depend on the thread count") {
  const auto walk = generate(GeneratorSpec::walk(StepModel::normal(0, 1), 1200, 3));
  const auto config = quick({4}, 16);
  const auto run = [&](unsigned threads) {
    set_max_threads(threads);
    const auto mc = monte_carlo_distribution(StepModel::uniform_b(0.6), 5, 300'000, 2);
    const auto windows = windowed_analyze(walk, {400, 200}, config);
    auto text = emit(windows, config, OutputFormat::json);
    for (double w : mc.weights()) text += std::to_string(w);
    return text;
  };
  const auto one = run(1);
  const auto four = run(4);
  set_max_threads(0);
  CHECK(one == four);
}

TEST_CASE("worker exceptions reach the caller") {
  set_max_threads(4);
  CHECK_THROWS_AS(parallel_for(64, [](std::size_t i) {
                    if (i == 17) throw RangeError("boom");
                  }),
                  RangeError);
  std::vector<int> hits(100, 0);
  parallel_for(100, [&](std::size_t i) { hits[i] += 1; });
  set_max_threads(0);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
