#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mdc/types.hpp"

namespace mdc {

/// Values indexed by (economy, year): GDP per capita, population, Gini,
/// emissions, or per-year metric scores.
class SeriesTable {
 public:
  void set(const std::string& economy, Year year, double value);
  std::optional<double> get(const std::string& economy, Year year) const;
  /// Values of one economy in [first, last], in year order.
  std::vector<double> range(const std::string& economy, Year first, Year last) const;

  std::vector<std::string> economies() const;
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept;

  const std::map<std::string, std::map<Year, double>>& data() const noexcept { return data_; }

 private:
  std::map<std::string, std::map<Year, double>> data_;
};

/// `economy,year,value`; an optional value column name may be given.
SeriesTable parse_series_csv(std::istream& in, const std::string& value_column = "value");
SeriesTable load_series_csv(const std::filesystem::path& path,
                            const std::string& value_column = "value");
void write_series_csv(std::ostream& out, const SeriesTable& table);

}  // namespace mdc
