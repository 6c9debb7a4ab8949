#include "mdc/depvar.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mdc/error.hpp"

namespace mdc {

std::map<std::string, double> growth_depvar(const SeriesTable& gdp, Year start, int horizon,
                                            Warnings* warnings) {
  if (horizon <= 0) throw Error(ErrorKind::Config, "growth horizon must be positive");
  std::map<std::string, double> out;
  std::size_t skipped = 0;
  for (const auto& [economy, years] : gdp.data()) {
    const auto first = gdp.get(economy, start);
    const auto last = gdp.get(economy, start + horizon);
    if (!first || !last || !(*first > 0.0) || !(*last > 0.0)) {
      ++skipped;
      continue;
    }
    out[economy] = 100.0 / horizon * std::log(*last / *first);
  }
  if (skipped)
    warn(warnings, fmt::format("growth {}-{}: {} economies skipped (missing or non-positive GDP)",
                               start, start + horizon, skipped));
  return out;
}

std::map<std::pair<std::string, std::string>, double> panel_average_depvar(
    const SeriesTable& series, std::span<const PanelPeriod> panels, Warnings* warnings) {
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (panels[i].end < panels[i].start)
      throw Error(ErrorKind::Config, fmt::format("panel '{}' ends before it starts", panels[i].label));
    for (std::size_t j = i + 1; j < panels.size(); ++j)
      if (panels[i].start <= panels[j].end && panels[j].start <= panels[i].end)
        throw Error(ErrorKind::Config,
                    fmt::format("panels '{}' and '{}' overlap", panels[i].label, panels[j].label));
  }
  std::map<std::pair<std::string, std::string>, double> out;
  std::size_t skipped = 0;
  for (const auto& economy : series.economies()) {
    for (const auto& p : panels) {
      const auto values = series.range(economy, p.start, p.end);
      if (values.empty()) {
        ++skipped;
        continue;
      }
      double sum = 0.0;
      for (double v : values) sum += v;
      out[{economy, p.label}] = sum / static_cast<double>(values.size());
    }
  }
  if (skipped) warn(warnings, fmt::format("panel average: {} economy-panel pairs without data skipped", skipped));
  return out;
}

SeriesTable emission_intensity_depvar(const SeriesTable& ghg, const SeriesTable& gdp_pc,
                                      const SeriesTable& population, Warnings* warnings) {
  SeriesTable out;
  std::size_t skipped = 0;
  for (const auto& [economy, years] : ghg.data()) {
    for (const auto& [year, emissions] : years) {
      const auto income = gdp_pc.get(economy, year);
      const auto pop = population.get(economy, year);
      if (!income || !pop || !(emissions > 0.0) || !(*income > 0.0) || !(*pop > 0.0)) {
        ++skipped;
        continue;
      }
      out.set(economy, year, std::log(emissions / (*income * *pop)));
    }
  }
  if (skipped)
    warn(warnings, fmt::format("emission intensity: {} economy-years skipped (missing or non-positive input)", skipped));
  return out;
}

}  // namespace mdc
