#include "mdc/series.hpp"

#include <fstream>

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

void SeriesTable::set(const std::string& economy, Year year, double value) {
  data_[economy][year] = value;
}

std::optional<double> SeriesTable::get(const std::string& economy, Year year) const {
  auto e = data_.find(economy);
  if (e == data_.end()) return std::nullopt;
  auto y = e->second.find(year);
  if (y == e->second.end()) return std::nullopt;
  return y->second;
}

std::vector<double> SeriesTable::range(const std::string& economy, Year first, Year last) const {
  std::vector<double> out;
  auto e = data_.find(economy);
  if (e == data_.end()) return out;
  for (auto it = e->second.lower_bound(first); it != e->second.end() && it->first <= last; ++it)
    out.push_back(it->second);
  return out;
}

std::vector<std::string> SeriesTable::economies() const {
  std::vector<std::string> out;
  out.reserve(data_.size());
  for (const auto& [economy, _] : data_) out.push_back(economy);
  return out;
}

std::size_t SeriesTable::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, years] : data_) n += years.size();
  return n;
}

SeriesTable parse_series_csv(std::istream& in, const std::string& value_column) {
  csv::Reader reader(in);
  const auto economy = reader.require("economy");
  const auto year = reader.require("year");
  const auto value = reader.require(value_column);
  SeriesTable table;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row[value].empty()) continue;  // missing observation
    auto y = csv::parse_int(row[year]);
    auto v = csv::parse_double(row[value]);
    if (!y || !v)
      throw Error(ErrorKind::Validation,
                  fmt::format("series row {}: unparseable year or value", reader.row_number()));
    table.set(row[economy], static_cast<Year>(*y), *v);
  }
  return table;
}

SeriesTable load_series_csv(const std::filesystem::path& path, const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return parse_series_csv(in, value_column);
}

void write_series_csv(std::ostream& out, const SeriesTable& table) {
  out << "economy,year,value\n";
  for (const auto& [economy, years] : table.data())
    for (const auto& [year, value] : years)
      csv::write_row(out, {economy, std::to_string(year), csv::format_double(value)});
}

}  // namespace mdc
