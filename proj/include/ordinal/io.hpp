#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "ordinal/classes.hpp"
#include "ordinal/nullmodel.hpp"
#include "ordinal/pattern.hpp"

namespace ordinal {

/// Zero-based column index, or a column name looked up in the header row.
using ColumnSelector = std::variant<std::size_t, std::string>;

struct CsvOptions {
  ColumnSelector column = std::size_t{0};
  bool header = false;
  char delimiter = ',';
};

/// Reads one numeric column. Accepts LF or CRLF and a UTF-8 byte-order mark.
/// Trailing blank lines are ignored; a blank line followed by more data, a
/// missing cell, or a non-numeric cell throws ParseError with the 1-based line.
/// Throws IOError if the file cannot be read and EmptyError if it has no values.
TimeSeries ingest_csv(const std::filesystem::path& path, const CsvOptions& options = {});
TimeSeries parse_csv(std::string_view text, const CsvOptions& options = {});

/// {"n", "kind", "sample_count", "weights": {"1234": w, ...}}
std::string distribution_to_json(const PatternDistribution& dist);
PatternDistribution distribution_from_json(std::string_view text);
/// "pattern,weight" rows in lexicographic order.
std::string distribution_to_csv(const PatternDistribution& dist);

/// {"n", "source", "classes": [["1234"], ["1243", "2134"], ...]}
std::string classes_to_json(const EquivalenceClassTable& table);
EquivalenceClassTable classes_from_json(std::string_view text);

/// {"family", "parameters", "n", "method", "seed", "sample_count", "description", "weights"}
std::string null_model_to_json(const NullModel& model);

/// Writes `bytes` to `path`, throwing IOError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace ordinal
