// ordwalk: ordinal-pattern analysis of time series against random-walk nulls.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "ordinal/analysis.hpp"
#include "ordinal/classes.hpp"
#include "ordinal/error.hpp"
#include "ordinal/generators.hpp"
#include "ordinal/io.hpp"
#include "ordinal/nullmodel.hpp"

using namespace ordinal;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, numerical = 3 };

struct Common {
  std::uint64_t seed = 0;
  bool strict = false;
  std::string format = "json";
  std::string output;
  CLI::Option* seed_opt = nullptr;

  void require_seed(bool stochastic) const {
    if (strict && stochastic && seed_opt->count() == 0) throw SpecError("--strict needs an explicit --seed for stochastic runs");
  }
  void write(const std::string& bytes) const {
    if (output.empty() || output == "-") {
      std::cout << bytes;
      std::cout.flush();
      if (!std::cout) throw IOError("failed writing to standard output");
    } else {
      write_file(output, bytes);
    }
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  c.seed_opt = cmd->add_option("--seed", c.seed, "Base seed for every random stream");
  cmd->add_flag("--strict", c.strict, "Refuse stochastic runs without --seed");
  if (with_format) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "plotdata"}));
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
}

struct StepOptions {
  std::string family = "uniform";
  double b = 0.5;
  double mu = 0.0;
  double sigma = 1.0;

  StepModel model() const {
    if (family == "uniform") return StepModel::uniform_b(b);
    if (family == "normal") return StepModel::normal(mu, sigma);
    throw SpecError("unknown step family '" + family + "'");
  }
};

void add_step_options(CLI::App* cmd, StepOptions& s) {
  cmd->add_option("--step", s.family, "Step law: uniform or normal")->check(CLI::IsMember({"uniform", "normal"}));
  cmd->add_option("--b", s.b, "Uniform steps on [b-1, b]");
  cmd->add_option("--mu", s.mu, "Normal step mean");
  cmd->add_option("--sigma", s.sigma, "Normal step standard deviation");
}

// ---- analyze / window -------------------------------------------------------

struct AnalyzeOptions {
  Common common;
  std::string input;
  std::string column = "0";
  bool header = false;
  std::string config_path;
  std::vector<int> orders;
  int delay = 1;
  std::string tie = "stable";
  double jitter_scale = 0.0;
  std::string null_kind = "associated";
  std::uint64_t null_length = 0;
  std::uint64_t null_samples = 0;
  StepOptions step;
  std::size_t replicates = 400;
  double alpha = 1.0;
  std::size_t window = 1258;
  std::size_t stride = 250;

  std::map<std::string, CLI::Option*> opts;
};

void add_analyze_options(CLI::App* cmd, AnalyzeOptions& a) {
  add_common(cmd, a.common);
  cmd->add_option("input", a.input, "CSV file with the series")->required();
  cmd->add_option("--column", a.column, "Column index (0-based) or header name");
  cmd->add_flag("--header", a.header, "First row holds column names");
  cmd->add_option("--config", a.config_path, "JSON config file; explicit flags override it");
  a.opts["orders"] = cmd->add_option("--orders", a.orders, "Pattern orders in [3, 7]")->delimiter(',');
  a.opts["delay"] = cmd->add_option("--delay", a.delay, "Embedding delay");
  a.opts["tie"] = cmd->add_option("--tie", a.tie, "Tie policy")->check(CLI::IsMember({"stable", "strict", "jitter"}));
  a.opts["jitter"] = cmd->add_option("--jitter-scale", a.jitter_scale, "Noise half-width for --tie jitter");
  a.opts["null"] = cmd->add_option("--null", a.null_kind, "Null model")
                       ->check(CLI::IsMember({"associated", "uniform", "normal", "closed-uniform", "closed-normal"}));
  a.opts["null_length"] = cmd->add_option("--null-length", a.null_length, "Associated walk length M (0: default)");
  a.opts["null_samples"] = cmd->add_option("--null-samples", a.null_samples, "Monte Carlo draws (0: default)");
  a.opts["b"] = cmd->add_option("--b", a.step.b, "b for uniform nulls");
  a.opts["mu"] = cmd->add_option("--mu", a.step.mu, "Mean for normal nulls");
  a.opts["sigma"] = cmd->add_option("--sigma", a.step.sigma, "Standard deviation for normal nulls");
  a.opts["replicates"] = cmd->add_option("--replicates", a.replicates, "Bootstrap replicates (0 disables)");
  a.opts["alpha"] = cmd->add_option("--alpha", a.alpha, "Pseudocount for sampled nulls");
}

bool given(const AnalyzeOptions& a, const char* name) { return a.opts.at(name)->count() > 0; }

AnalysisConfig build_config(const AnalyzeOptions& a) {
  AnalysisConfig c;
  if (!a.config_path.empty()) c = config_from_json(read_file(a.config_path));
  if (given(a, "orders")) c.orders = a.orders;
  if (given(a, "delay")) c.delay = a.delay;
  if (given(a, "tie") || given(a, "jitter")) {
    c.policy.mode = parse_tie_mode(a.tie);
    c.policy.jitter_scale = a.jitter_scale;
  }
  const bool null_flags = given(a, "null") || given(a, "null_length") || given(a, "null_samples") || given(a, "b") ||
                          given(a, "mu") || given(a, "sigma");
  if (null_flags) {
    const std::string kind = given(a, "null") ? a.null_kind : "associated";
    if (kind == "associated") {
      c.null = NullSpec::associated(a.null_length);
    } else if (kind == "uniform") {
      c.null = NullSpec::step_law(StepModel::uniform_b(a.step.b), a.null_samples);
    } else if (kind == "normal") {
      c.null = NullSpec::step_law(StepModel::normal(a.step.mu, a.step.sigma), a.null_samples);
    } else if (kind == "closed-uniform") {
      c.null = NullSpec::closed_form(StepModel::uniform_b(a.step.b));
    } else {
      c.null = NullSpec::closed_form(StepModel::normal(0.0, 1.0));
    }
  }
  if (given(a, "replicates")) c.replicates = a.replicates;
  if (given(a, "alpha")) c.alpha = a.alpha;
  if (a.common.seed_opt->count() > 0) c.seed = a.common.seed;
  c.policy.seed = c.seed;
  c.validate();
  return c;
}

TimeSeries load_series(const AnalyzeOptions& a) {
  CsvOptions csv;
  csv.header = a.header;
  const bool numeric = !a.column.empty() && a.column.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) {
    csv.column = static_cast<std::size_t>(std::stoull(a.column));
  } else {
    csv.column = a.column;
  }
  return ingest_csv(a.input, csv);
}

bool stochastic(const AnalysisConfig& c) {
  return c.null.kind == NullSpec::Kind::associated || c.null.kind == NullSpec::Kind::step_law || c.replicates > 0 ||
         c.policy.mode == TiePolicy::Mode::jitter;
}

int run_analyze(const AnalyzeOptions& a, bool windowed) {
  auto config = build_config(a);
  const bool seeded = a.common.seed_opt->count() > 0 ||
                      (!a.config_path.empty() && nlohmann::json::parse(read_file(a.config_path)).contains("seed"));
  if (a.common.strict && stochastic(config) && !seeded) throw SpecError("--strict needs an explicit --seed for stochastic runs");
  const auto series = load_series(a);
  std::vector<WindowReport> reports;
  if (windowed) {
    reports = windowed_analyze(series, {a.window, a.stride}, config);
  } else {
    reports.push_back(analyze(series, config));
  }
  a.common.write(emit(reports, config, parse_output_format(a.common.format)));
  return ok;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
  Common common;
  std::string kind = "walk";
  std::size_t length = 1000;
  StepOptions step;
  double x0 = 0.3;
  double period = 20.0;
  double phase = 0.0;
  double amplitude = 1.0;
};

int run_simulate(const SimulateOptions& s) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(s.kind);
  spec.length = s.length;
  spec.seed = s.common.seed;
  spec.step = s.step.model();
  spec.x0 = s.x0;
  spec.period = s.period;
  spec.phase = s.phase;
  spec.amplitude = s.amplitude;
  s.common.require_seed(spec.kind == GeneratorSpec::Kind::iid_uniform || spec.kind == GeneratorSpec::Kind::walk);
  const auto series = generate(spec);

  std::ostringstream os;
  os.precision(17);
  if (s.common.format == "json") {
    nlohmann::ordered_json j;
    j["kind"] = s.kind;
    j["seed"] = s.common.seed;
    j["values"] = std::vector<double>(series.values().begin(), series.values().end());
    os << j.dump(2) << '\n';
  } else {
    os << "t,value,seed\n";
    for (std::size_t t = 0; t < series.size(); ++t) os << t + 1 << ',' << series[t] << ',' << s.common.seed << '\n';
  }
  s.common.write(os.str());
  return ok;
}

// ---- nullmodel --------------------------------------------------------------

struct NullOptions {
  Common common;
  int n = 4;
  StepOptions step;
  std::string method = "closed";
  std::uint64_t samples = 1'000'000;
  int resolution = 400;
  int delay = 1;
};

int run_nullmodel(const NullOptions& o) {
  const auto model = o.step.model();
  NullModel null{model, o.n, PatternDistribution::uniform(std::max(2, std::min(o.n, kMaxDistributionOrder))),
                 NullMethod::closed_form, 0, o.common.seed, ""};
  if (o.method == "closed") {
    if (o.delay != 1) throw SpecError("closed-form nulls describe consecutive patterns (delay 1)");
    null.distribution = closed_form(model, o.n);
    null.description = "closed_form:" + model.describe();
  } else if (o.method == "mc") {
    o.common.require_seed(true);
    null.distribution = monte_carlo_distribution(model, o.n, o.samples, o.common.seed, o.delay);
    null.method = NullMethod::monte_carlo;
    null.sample_count = o.samples;
    null.description = "monte_carlo:" + model.describe();
  } else {
    if (model.family != StepModel::Family::uniform_b) throw SpecError("the quadrature oracle covers uniform steps only");
    auto w = volume_oracle_distribution(o.n, model.b, o.resolution);
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    null.distribution = PatternDistribution::from_weights(o.n, std::move(w), PatternDistribution::Kind::model, 0);
    null.method = NullMethod::quadrature;
    null.description = "quadrature:" + model.describe() + "[R=" + std::to_string(o.resolution) + "]";
  }

  if (o.common.format == "json") {
    o.common.write(null_model_to_json(null) + "\n");
  } else {
    std::ostringstream os;
    os.precision(17);
    os << "pattern,weight,seed\n";
    for (std::uint64_t r = 0; r < null.distribution.size(); ++r) {
      os << lex_unrank(o.n, r).to_string() << ',' << null.distribution.weight(r) << ',' << o.common.seed << '\n';
    }
    o.common.write(os.str());
  }
  return ok;
}

// ---- classes ----------------------------------------------------------------

struct ClassOptions {
  Common common;
  int n = 4;
  std::string source = "auto";
};

int run_classes(const ClassOptions& o) {
  const auto table = o.source == "rc" ? rc_closure(o.n) : o.source == "tabulated" ? equivalence_classes(o.n) : class_table_for(o.n);
  auto j = nlohmann::ordered_json::parse(classes_to_json(table));
  j["seed"] = o.common.seed;
  o.common.write(j.dump(2) + "\n");
  return ok;
}

// ---- oracle -----------------------------------------------------------------

struct OracleOptions {
  Common common;
  int n = 4;
  std::vector<double> bs{0.55, 0.65, 0.75, 0.85};
  int resolution = 2000;
};

int run_oracle(const OracleOptions& o) {
  std::ostringstream os;
  os.precision(17);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (o.common.format != "json") os << "b,pattern,oracle,closed_form,abs_diff,seed\n";
  for (double b : o.bs) {
    const auto oracle = volume_oracle_distribution(o.n, b, o.resolution);
    std::optional<PatternDistribution> exact;
    if (o.n <= 4) exact = closed_form_uniform(o.n, b);
    for (std::uint64_t r = 0; r < oracle.size(); ++r) {
      const auto p = lex_unrank(o.n, r).to_string();
      if (o.common.format == "json") {
        nlohmann::ordered_json row{{"b", b}, {"pattern", p}, {"oracle", oracle[r]}};
        row["closed_form"] = exact ? nlohmann::ordered_json(exact->weight(r)) : nlohmann::ordered_json(nullptr);
        row["abs_diff"] = exact ? nlohmann::ordered_json(std::abs(exact->weight(r) - oracle[r])) : nlohmann::ordered_json(nullptr);
        rows.push_back(std::move(row));
      } else {
        os << b << ',' << p << ',' << oracle[r] << ',';
        if (exact) os << exact->weight(r) << ',' << std::abs(exact->weight(r) - oracle[r]);
        else os << ',';
        os << ',' << o.common.seed << '\n';
      }
    }
  }
  if (o.common.format == "json") {
    nlohmann::ordered_json j{{"n", o.n}, {"resolution", o.resolution}, {"seed", o.common.seed}, {"rows", std::move(rows)}};
    os << j.dump(2) << '\n';
  }
  o.common.write(os.str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordinal-pattern analysis of time series against random-walk null models"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "Metrics of one series");
  add_analyze_options(analyze_cmd, analyze_opts);

  AnalyzeOptions window_opts;
  auto* window_cmd = app.add_subcommand("window", "Metrics over sliding windows");
  add_analyze_options(window_cmd, window_opts);
  window_cmd->add_option("--window", window_opts.window, "Window length W")->check(CLI::PositiveNumber);
  window_cmd->add_option("--stride", window_opts.stride, "Stride S")->check(CLI::PositiveNumber);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic series");
  add_common(sim_cmd, sim.common);
  sim.common.format = "csv";
  sim_cmd->add_option("--kind", sim.kind, "iid_uniform, walk, logistic, mod10 or sine");
  sim_cmd->add_option("-N,--length", sim.length, "Series length");
  add_step_options(sim_cmd, sim.step);
  sim_cmd->add_option("--x0", sim.x0, "Initial condition for maps");
  sim_cmd->add_option("--period", sim.period, "Sine period in samples");
  sim_cmd->add_option("--phase", sim.phase, "Sine phase");
  sim_cmd->add_option("--amplitude", sim.amplitude, "Sine amplitude");

  NullOptions null;
  auto* null_cmd = app.add_subcommand("nullmodel", "Emit a model pattern distribution");
  add_common(null_cmd, null.common);
  null_cmd->add_option("-n,--order", null.n, "Pattern order");
  add_step_options(null_cmd, null.step);
  null_cmd->add_option("--method", null.method, "closed, mc or quadrature")->check(CLI::IsMember({"closed", "mc", "quadrature"}));
  null_cmd->add_option("--samples", null.samples, "Monte Carlo draws");
  null_cmd->add_option("--resolution", null.resolution, "Quadrature cells per axis");
  null_cmd->add_option("--delay", null.delay, "Embedding delay (Monte Carlo)");

  ClassOptions cls;
  auto* cls_cmd = app.add_subcommand("classes", "Emit an equivalence class table");
  add_common(cls_cmd, cls.common, false);
  cls_cmd->add_option("-n,--order", cls.n, "Pattern order");
  cls_cmd->add_option("--source", cls.source, "auto, tabulated or rc")->check(CLI::IsMember({"auto", "tabulated", "rc"}));

  OracleOptions orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Quadrature sweep against the closed forms");
  add_common(orc_cmd, orc.common);
  orc_cmd->add_option("-n,--order", orc.n, "Pattern order (2..5)");
  orc_cmd->add_option("--b", orc.bs, "Values of b")->delimiter(',');
  orc_cmd->add_option("--resolution", orc.resolution, "Cells per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*analyze_cmd) return run_analyze(analyze_opts, false);
    if (*window_cmd) return run_analyze(window_opts, true);
    if (*sim_cmd) return run_simulate(sim);
    if (*null_cmd) return run_nullmodel(null);
    if (*cls_cmd) return run_classes(cls);
    if (*orc_cmd) return run_oracle(orc);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  }
  return usage;
}
