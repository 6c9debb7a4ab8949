#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mdc/config.hpp"
#include "mdc/diagnostics.hpp"
#include "mdc/ingest.hpp"
#include "mdc/instrument.hpp"
#include "mdc/metrics.hpp"
#include "mdc/study.hpp"

namespace mdc {

/// Simple regression of one dimension's ECI on another's over common economies.
struct CrossDimensionFit {
  std::string x;
  std::string y;
  Year year = 0;
  Eigen::Index n = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double p_value = 1.0;
};

std::vector<CrossDimensionFit> cross_dimension_fits(const std::vector<ComplexityVector>& ecis);

struct RunReport {
  std::vector<std::string> stages;
  std::vector<std::filesystem::path> files;  // relative to the output directory
  Warnings warnings;
  std::map<std::string, std::string> selected_models;  // study -> model id or "baseline"
  std::vector<CrossDimensionFit> cross_dimension;
};

/// Loads every configured dimension and applies the eligibility filters
/// (economy-level thresholds use patent/publication totals from the
/// technology/research dimensions when present).
std::vector<OutputPanel> load_dimensions(const RunConfig& config, const AuxTable* aux,
                                         Warnings* warnings = nullptr);

/// Runs the requested stages and writes their artifacts plus manifest.json.
/// Errors are rethrown with the failing stage name; files written by earlier
/// stages are left in place.
RunReport run_pipeline(const RunConfig& config);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mdc
