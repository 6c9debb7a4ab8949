#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mdc/types.hpp"

namespace mdc {

/// Shape of a generated test fixture. Economies carry latent capabilities
/// that drive which activities they specialize in, their GDP path, Gini,
/// and emissions, so the regressions have structure to find.
struct SyntheticOptions {
  int economies = 150;
  int activities = 1300;
  std::vector<std::string> dimensions{"trade", "technology", "research"};
  std::vector<Year> years{1996, 1999, 2000, 2004, 2008, 2009, 2012, 2014, 2016};
  std::uint64_t seed = 42;
  /// Planted growth effects of the latent trade and technology capabilities.
  double growth_trade = 1.2;
  double growth_technology = 0.8;
  double noise = 0.6;
  /// Use library-default eligibility thresholds in the emitted config.
  bool filters = true;
};

/// Writes dimension CSVs, aux.csv, series CSVs and config.json into `dir`
/// (created if needed). Returns the config path.
std::filesystem::path write_synthetic_fixture(const std::filesystem::path& dir,
                                              const SyntheticOptions& options);

}  // namespace mdc
