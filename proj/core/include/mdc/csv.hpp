#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mdc::csv {

/// Splits one CSV record. Supports double-quoted fields with "" escapes;
/// embedded newlines are not supported.
std::vector<std::string> split_line(std::string_view line);

/// Header-aware reader over a stream. Blank lines are skipped, a UTF-8 BOM on
/// the header is ignored, and trailing carriage returns are stripped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::optional<std::size_t> find(std::string_view column) const;
  /// Index of a mandatory column; throws a Schema error naming it when absent.
  std::size_t require(std::string_view column) const;

  /// Reads the next data row. Returns false at end of input.
  bool next(std::vector<std::string>& row);
  /// 1-based data row number of the last row returned by next().
  std::size_t row_number() const noexcept { return row_; }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t row_ = 0;
  std::string line_;
};

std::string quote(std::string_view field);

/// Full round-trip precision formatting for machine-readable outputs.
std::string format_double(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parses a finite double; nullopt on trailing junk or empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace mdc::csv
