#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordinal/metrics.hpp"
#include "ordinal/nullmodel.hpp"
#include "ordinal/pattern.hpp"

namespace ordinal {

struct AnalysisConfig {
  std::vector<int> orders{4, 5};  // each in [3, 7]
  int delay = 1;
  TiePolicy policy{};
  NullSpec null = NullSpec::associated();
  std::size_t replicates = 400;   // bootstrap walks; 0 disables the band
  std::uint64_t seed = 0;
  double alpha = 1.0;

  void validate() const;
};

/// Parses the JSON config accepted by the command line tool; absent keys keep
/// their defaults. Throws ParseError on malformed JSON and SpecError on bad values.
AnalysisConfig config_from_json(std::string_view text, AnalysisConfig base = {});
std::string config_to_json(const AnalysisConfig& config);

struct WindowSpec {
  std::size_t length = 1258;
  std::size_t stride = 250;
};

struct OrderResult {
  MetricReport metrics;
  std::vector<double> empirical;  // weights by lexicographic rank
  std::vector<double> null;
};

struct WindowReport {
  std::size_t window_start = 1;  // 1-based index of the first sample
  std::size_t length = 0;
  std::uint64_t seed = 0;
  std::vector<OrderResult> orders;
};

/// Full metric set for every configured order. Deterministic in (series, config).
WindowReport analyze(const TimeSeries& series, const AnalysisConfig& config);

/// Seed used for window k of a windowed run; window 0 keeps the base seed.
std::uint64_t window_seed(std::uint64_t seed, std::size_t k);

/// Runs analyze on windows [k S, k S + W) for k = 0..floor((N - W) / S).
/// Results are ordered by window start.
std::vector<WindowReport> windowed_analyze(const TimeSeries& series, const WindowSpec& window,
                                           const AnalysisConfig& config);

enum class OutputFormat { json, csv, plotdata };
OutputFormat parse_output_format(std::string_view text);

/// json: {"seed", "config", "windows": [...]}.
/// csv: window_start,n,pe,missing,kl,kl_mean,kl_std,g,eps_up,eps_down,seed.
/// plotdata: window_start,n,pattern,empirical,null,seed; one row per pattern.
std::string emit(const std::vector<WindowReport>& reports, const AnalysisConfig& config, OutputFormat format);

/// Reads back the "windows" array of emit(..., json).
std::vector<WindowReport> reports_from_json(std::string_view text);

}  // namespace ordinal
