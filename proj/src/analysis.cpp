#include "ordinal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json_detail.hpp"
#include "ordinal/classes.hpp"
#include "ordinal/error.hpp"
#include "ordinal/parallel.hpp"

namespace ordinal {

using nlohmann::json;
using nlohmann::ordered_json;

void AnalysisConfig::validate() const {
  if (orders.empty()) throw SpecError("at least one order is required");
  for (int n : orders) {
    if (n < 3 || n > 7) throw OrderError("analysis orders must lie in [3, 7], got " + std::to_string(n));
  }
  if (delay < 1) throw RangeError("delay must be >= 1");
  if (replicates == 1) throw RangeError("bootstrap needs 0 or at least 2 replicates");
  if (!std::isfinite(alpha) || alpha < 0.0) throw RangeError("smoothing alpha must be >= 0");
  policy.validate();
  if (null.kind == NullSpec::Kind::closed_form) {
    for (int n : orders) {
      if (n > 4) throw SpecError("closed-form nulls exist only for n <= 4; use a step-law null for n = " + std::to_string(n));
    }
  }
}

namespace {

ordered_json null_to_json(const NullSpec& spec) {
  ordered_json j;
  switch (spec.kind) {
    case NullSpec::Kind::associated:
      j["kind"] = "associated";
      j["length"] = spec.samples;
      break;
    case NullSpec::Kind::step_law:
    case NullSpec::Kind::closed_form: {
      const bool closed = spec.kind == NullSpec::Kind::closed_form;
      if (spec.step.family == StepModel::Family::uniform_b) {
        j["kind"] = closed ? "closed_uniform" : "uniform";
        j["b"] = spec.step.b;
      } else if (spec.step.family == StepModel::Family::normal) {
        j["kind"] = closed ? "closed_normal" : "normal";
        if (!closed) {
          j["mu"] = spec.step.mu;
          j["sigma"] = spec.step.sigma;
        }
      } else {
        j["kind"] = "empirical_steps";
      }
      if (!closed) j["samples"] = spec.samples;
      break;
    }
    case NullSpec::Kind::fixed: j["kind"] = "fixed"; break;
  }
  return j;
}

NullSpec null_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto samples = j.value("samples", std::uint64_t{0});
  if (kind == "associated") return NullSpec::associated(j.value("length", std::uint64_t{0}));
  if (kind == "uniform") return NullSpec::step_law(StepModel::uniform_b(j.at("b").get<double>()), samples);
  if (kind == "normal") {
    return NullSpec::step_law(StepModel::normal(j.value("mu", 0.0), j.value("sigma", 1.0)), samples);
  }
  if (kind == "closed_uniform") return NullSpec::closed_form(StepModel::uniform_b(j.at("b").get<double>()));
  if (kind == "closed_normal") return NullSpec::closed_form(StepModel::normal(0.0, 1.0));
  throw SpecError("unknown null kind '" + kind + "'");
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_double(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string config_to_json(const AnalysisConfig& config) {
  ordered_json j;
  j["orders"] = config.orders;
  j["delay"] = config.delay;
  j["tie"] = {{"mode", to_string(config.policy.mode)},
              {"jitter_scale", config.policy.jitter_scale},
              {"seed", config.policy.seed}};
  j["null"] = null_to_json(config.null);
  j["replicates"] = config.replicates;
  j["seed"] = config.seed;
  j["alpha"] = config.alpha;
  return j.dump();
}

AnalysisConfig config_from_json(std::string_view text, AnalysisConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1 + static_cast<std::size_t>(std::count(
                                       text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(e.byte, text.size())), '\n')));
  }
  try {
    if (!j.is_object()) throw SpecError("config must be a JSON object");
    if (j.contains("orders")) base.orders = j.at("orders").get<std::vector<int>>();
    if (j.contains("delay")) base.delay = j.at("delay").get<int>();
    if (j.contains("tie")) {
      const auto& t = j.at("tie");
      base.policy.mode = parse_tie_mode(t.value("mode", std::string("stable")));
      base.policy.jitter_scale = t.value("jitter_scale", 0.0);
      base.policy.seed = t.value("seed", std::uint64_t{0});
    }
    if (j.contains("null")) base.null = null_from_json(j.at("null"));
    if (j.contains("replicates")) base.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("invalid config: ") + e.what());
  }
  base.validate();
  return base;
}

WindowReport analyze(const TimeSeries& series, const AnalysisConfig& config) {
  config.validate();
  const int max_order = *std::max_element(config.orders.begin(), config.orders.end());
  if (series.size() < static_cast<std::size_t>((max_order - 1) * config.delay + 1)) {
    throw LengthError("series of length " + std::to_string(series.size()) + " is too short for order " +
                      std::to_string(max_order));
  }

  const KlOptions options{config.delay, config.policy, config.alpha};
  const auto dist2 = empirical_distribution(series, 2, config.delay, config.policy);

  WindowReport report;
  report.length = series.size();
  report.seed = config.seed;
  for (int n : config.orders) {
    const auto p = empirical_distribution(series, n, config.delay, config.policy);
    const auto null = build_null(series, n, config.null, config.seed, options);
    const auto kl = kl_against(p, null, options);
    const auto classes = class_table_for(n);

    OrderResult result;
    auto& m = result.metrics;
    m.n = n;
    m.windows = p.sample_count();
    m.permutation_entropy = permutation_entropy(p);
    m.missing_count = missing_pattern_count(p);
    m.kl_to_model = kl.value;
    m.g_statistic = g_statistic(p, classes);
    m.epsilon_up = momentum_epsilon(p, dist2, Direction::up);
    m.epsilon_down = momentum_epsilon(p, dist2, Direction::down);
    if (config.replicates > 0) {
      const auto band = bootstrap_band(series, n, config.replicates, 0, config.seed, null, options);
      m.kl_mean = band.mean;
      m.kl_std = band.std;
    }
    m.provenance = Provenance{null.description, config.seed, to_string(classes.source()), config.alpha,
                              kl.smoothing_applied};
    result.empirical.assign(p.weights().begin(), p.weights().end());
    result.null.assign(null.distribution.weights().begin(), null.distribution.weights().end());
    report.orders.push_back(std::move(result));
  }
  return report;
}

std::uint64_t window_seed(std::uint64_t seed, std::size_t k) {
  return seed + static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL;
}

std::vector<WindowReport> windowed_analyze(const TimeSeries& series, const WindowSpec& window,
                                           const AnalysisConfig& config) {
  config.validate();
  if (window.length < 1 || window.stride < 1) throw RangeError("window length and stride must be >= 1");
  if (window.length > series.size()) {
    throw LengthError("window length " + std::to_string(window.length) + " exceeds series length " +
                      std::to_string(series.size()));
  }
  const std::size_t count = (series.size() - window.length) / window.stride + 1;
  std::vector<std::optional<WindowReport>> slots(count);
  parallel_for(count, [&](std::size_t k) {
    AnalysisConfig local = config;
    local.seed = window_seed(config.seed, k);
    auto report = analyze(series.slice(k * window.stride, window.length), local);
    report.window_start = k * window.stride + 1;
    slots[k] = std::move(report);
  });
  std::vector<WindowReport> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "plotdata") return OutputFormat::plotdata;
  throw SpecError("unknown output format '" + std::string(text) + "'");
}

std::string emit(const std::vector<WindowReport>& reports, const AnalysisConfig& config, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::json: {
      ordered_json root;
      root["seed"] = config.seed;
      root["config"] = ordered_json::parse(config_to_json(config));
      auto windows = ordered_json::array();
      for (const auto& w : reports) {
        ordered_json jw;
        jw["window_start"] = w.window_start;
        jw["length"] = w.length;
        jw["seed"] = w.seed;
        auto orders = ordered_json::array();
        for (const auto& o : w.orders) {
          const auto& m = o.metrics;
          ordered_json jo;
          jo["n"] = m.n;
          jo["windows"] = m.windows;
          jo["permutation_entropy"] = m.permutation_entropy;
          jo["missing_count"] = m.missing_count;
          jo["kl_to_model"] = optional_json(m.kl_to_model);
          jo["kl_mean"] = optional_json(m.kl_mean);
          jo["kl_std"] = optional_json(m.kl_std);
          jo["g_statistic"] = optional_json(m.g_statistic);
          jo["epsilon_up"] = optional_json(m.epsilon_up);
          jo["epsilon_down"] = optional_json(m.epsilon_down);
          jo["provenance"] = {{"model", m.provenance.model},
                              {"seed", m.provenance.seed},
                              {"class_source", m.provenance.class_source},
                              {"smoothing_alpha", m.provenance.smoothing_alpha},
                              {"smoothing_applied", m.provenance.smoothing_applied}};
          jo["empirical"] = detail::weights_object(m.n, o.empirical);
          jo["null"] = detail::weights_object(m.n, o.null);
          orders.push_back(std::move(jo));
        }
        jw["orders"] = std::move(orders);
        windows.push_back(std::move(jw));
      }
      root["windows"] = std::move(windows);
      os << root.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv: {
      os << "window_start,n,pe,missing,kl,kl_mean,kl_std,g,eps_up,eps_down,seed\n";
      for (const auto& w : reports) {
        for (const auto& o : w.orders) {
          const auto& m = o.metrics;
          os << w.window_start << ',' << m.n << ',' << format_double(m.permutation_entropy) << ',' << m.missing_count
             << ',' << format_optional(m.kl_to_model) << ',' << format_optional(m.kl_mean) << ','
             << format_optional(m.kl_std) << ',' << format_optional(m.g_statistic) << ','
             << format_optional(m.epsilon_up) << ',' << format_optional(m.epsilon_down) << ',' << w.seed << '\n';
        }
      }
      break;
    }
    case OutputFormat::plotdata: {
      os << "window_start,n,pattern,empirical,null,seed\n";
      for (const auto& w : reports) {
        for (const auto& o : w.orders) {
          for (std::uint64_t r = 0; r < o.empirical.size(); ++r) {
            os << w.window_start << ',' << o.metrics.n << ',' << lex_unrank(o.metrics.n, r).to_string() << ','
               << format_double(o.empirical[r]) << ',' << format_double(o.null[r]) << ',' << w.seed << '\n';
          }
        }
      }
      break;
    }
  }
  if (!os) throw IOError("failed to format report");
  return os.str();
}

std::vector<WindowReport> reports_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  try {
    std::vector<WindowReport> out;
    for (const auto& jw : root.at("windows")) {
      WindowReport w;
      w.window_start = jw.at("window_start").get<std::size_t>();
      w.length = jw.at("length").get<std::size_t>();
      w.seed = jw.at("seed").get<std::uint64_t>();
      for (const auto& jo : jw.at("orders")) {
        OrderResult o;
        auto& m = o.metrics;
        m.n = jo.at("n").get<int>();
        m.windows = jo.at("windows").get<std::uint64_t>();
        m.permutation_entropy = jo.at("permutation_entropy").get<double>();
        m.missing_count = jo.at("missing_count").get<std::uint64_t>();
        m.kl_to_model = optional_double(jo, "kl_to_model");
        m.kl_mean = optional_double(jo, "kl_mean");
        m.kl_std = optional_double(jo, "kl_std");
        m.g_statistic = optional_double(jo, "g_statistic");
        m.epsilon_up = optional_double(jo, "epsilon_up");
        m.epsilon_down = optional_double(jo, "epsilon_down");
        const auto& pv = jo.at("provenance");
        m.provenance = Provenance{pv.at("model").get<std::string>(), pv.at("seed").get<std::uint64_t>(),
                                  pv.at("class_source").get<std::string>(), pv.at("smoothing_alpha").get<double>(),
                                  pv.at("smoothing_applied").get<bool>()};
        o.empirical = detail::weights_from_object(m.n, jo.at("empirical"));
        o.null = detail::weights_from_object(m.n, jo.at("null"));
        w.orders.push_back(std::move(o));
      }
      out.push_back(std::move(w));
    }
    return out;
  } catch (const json::exception& e) {
    throw ValueError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace ordinal
