#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>

#include "mdc/diagnostics.hpp"
#include "mdc/series.hpp"

namespace mdc {

/// Inclusive year range used as one regression period.
struct PanelPeriod {
  std::string label;
  Year start = 0;
  Year end = 0;
};

/// Annualized growth in percent: 100 / horizon * ln(GDP[start + horizon] / GDP[start]).
/// Economies missing either endpoint (or with non-positive values) are skipped.
std::map<std::string, double> growth_depvar(const SeriesTable& gdp, Year start, int horizon = 10,
                                            Warnings* warnings = nullptr);

/// Arithmetic mean of the available years of each (economy, period).
std::map<std::pair<std::string, std::string>, double> panel_average_depvar(
    const SeriesTable& series, std::span<const PanelPeriod> panels, Warnings* warnings = nullptr);

/// ln(GHG / (GDP per capita * population)) per economy-year.
SeriesTable emission_intensity_depvar(const SeriesTable& ghg, const SeriesTable& gdp_pc,
                                      const SeriesTable& population, Warnings* warnings = nullptr);

}  // namespace mdc
