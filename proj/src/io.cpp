#include "ordinal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_detail.hpp"
#include "ordinal/error.hpp"

namespace ordinal {

namespace detail {

nlohmann::ordered_json weights_object(int n, std::span<const double> weights) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::uint64_t r = 0; r < weights.size(); ++r) out[lex_unrank(n, r).to_string()] = weights[r];
  return out;
}

std::vector<double> weights_from_object(int n, const nlohmann::json& object) {
  if (!object.is_object()) throw ValueError("weights must be a JSON object keyed by pattern");
  std::vector<double> w(factorial(n), 0.0);
  for (const auto& [key, value] : object.items()) {
    const auto pattern = OrdinalPattern::parse(key);
    if (pattern.order() != n) throw OrderMismatch("pattern " + key + " does not have order " + std::to_string(n));
    w[lex_rank(pattern)] = value.get<double>();
  }
  return w;
}

}  // namespace detail

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool is_blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

double parse_cell(std::string_view cell, std::size_t line) {
  if (cell.empty()) throw ParseError("missing value", line);
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError("'" + std::string(cell) + "' is not a number", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(cell) + "'", line);
  return v;
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    throw ParseError(e.what(), line);
  }
}

template <class F>
auto guard_json(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValueError(std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

TimeSeries parse_csv(std::string_view text, const CsvOptions& options) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    const auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  while (!lines.empty() && is_blank(lines.back())) lines.pop_back();

  std::size_t first = 0;
  std::size_t column = 0;
  if (options.header) {
    if (lines.empty()) throw EmptyError("CSV input is empty");
    const auto names = split(lines[0], options.delimiter);
    if (const auto* name = std::get_if<std::string>(&options.column)) {
      const auto it = std::find(names.begin(), names.end(), std::string_view(*name));
      if (it == names.end()) throw ParseError("no column named '" + *name + "'", 1);
      column = static_cast<std::size_t>(it - names.begin());
    } else {
      column = std::get<std::size_t>(options.column);
    }
    first = 1;
  } else {
    if (std::holds_alternative<std::string>(options.column)) {
      throw SpecError("selecting a column by name requires a header row");
    }
    column = std::get<std::size_t>(options.column);
  }

  std::vector<double> values;
  values.reserve(lines.size());
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_blank(lines[i])) throw ParseError("blank line inside the series", line_no);
    const auto cells = split(lines[i], options.delimiter);
    if (column >= cells.size()) throw ParseError("row has no column " + std::to_string(column), line_no);
    values.push_back(parse_cell(cells[column], line_no));
  }
  if (values.empty()) throw EmptyError("CSV input has no data rows");
  return TimeSeries(std::move(values));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IOError("failed reading '" + path.string() + "'");
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IOError("failed writing '" + path.string() + "'");
}

TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

std::string distribution_to_json(const PatternDistribution& dist) {
  nlohmann::ordered_json j;
  j["n"] = dist.order();
  j["kind"] = to_string(dist.kind());
  j["sample_count"] = dist.sample_count();
  j["weights"] = detail::weights_object(dist.order(), dist.weights());
  return j.dump(2);
}

PatternDistribution distribution_from_json(std::string_view text) {
  const auto j = parse_json(text);
  return guard_json([&] {
    const int n = j.at("n").get<int>();
    if (n < 2 || n > kMaxDistributionOrder) throw OrderError("distribution order out of range");
    const auto kind_text = j.value("kind", std::string("model"));
    PatternDistribution::Kind kind = PatternDistribution::Kind::model;
    if (kind_text == "empirical") {
      kind = PatternDistribution::Kind::empirical;
    } else if (kind_text != "model") {
      throw ValueError("unknown distribution kind '" + kind_text + "'");
    }
    return PatternDistribution::from_weights(n, detail::weights_from_object(n, j.at("weights")), kind,
                                             j.value("sample_count", std::uint64_t{0}));
  });
}

std::string distribution_to_csv(const PatternDistribution& dist) {
  std::ostringstream os;
  os.precision(17);
  os << "pattern,weight\n";
  for (std::uint64_t r = 0; r < dist.size(); ++r) os << lex_unrank(dist.order(), r).to_string() << ',' << dist.weight(r) << '\n';
  return os.str();
}

std::string classes_to_json(const EquivalenceClassTable& table) {
  nlohmann::ordered_json j;
  j["n"] = table.order();
  j["source"] = to_string(table.source());
  auto groups = nlohmann::ordered_json::array();
  for (const auto& group : table.classes()) {
    auto g = nlohmann::ordered_json::array();
    for (auto r : group) g.push_back(lex_unrank(table.order(), r).to_string());
    groups.push_back(std::move(g));
  }
  j["classes"] = std::move(groups);
  return j.dump(2);
}

EquivalenceClassTable classes_from_json(std::string_view text) {
  const auto j = parse_json(text);
  return guard_json([&] {
    const int n = j.at("n").get<int>();
    const auto source_text = j.value("source", std::string("appendix_data"));
    auto source = EquivalenceClassTable::Source::appendix_data;
    if (source_text == "rc_closure") {
      source = EquivalenceClassTable::Source::rc_closure;
    } else if (source_text != "appendix_data") {
      throw ValueError("unknown class source '" + source_text + "'");
    }
    std::vector<std::vector<std::uint64_t>> groups;
    for (const auto& g : j.at("classes")) {
      auto& group = groups.emplace_back();
      for (const auto& p : g) {
        const auto pattern = OrdinalPattern::parse(p.get<std::string>());
        if (pattern.order() != n) throw OrderMismatch("class pattern order does not match n");
        group.push_back(lex_rank(pattern));
      }
    }
    return EquivalenceClassTable(n, std::move(groups), source);
  });
}

std::string null_model_to_json(const NullModel& model) {
  nlohmann::ordered_json j;
  const auto& step = model.step_model;
  j["family"] = to_string(step.family);
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  switch (step.family) {
    case StepModel::Family::uniform_b: params["b"] = step.b; break;
    case StepModel::Family::normal:
      params["mu"] = step.mu;
      params["sigma"] = step.sigma;
      break;
    case StepModel::Family::empirical: params["step_count"] = step.steps.size(); break;
  }
  j["parameters"] = std::move(params);
  j["n"] = model.n;
  j["method"] = to_string(model.method);
  j["seed"] = model.seed;
  j["sample_count"] = model.sample_count;
  j["description"] = model.description;
  j["weights"] = detail::weights_object(model.n, model.distribution.weights());
  return j.dump(2);
}

}  // namespace ordinal
