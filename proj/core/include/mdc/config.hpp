#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdc/ingest.hpp"
#include "mdc/metrics.hpp"
#include "mdc/panel.hpp"
#include "mdc/types.hpp"

namespace mdc {

enum class Stage { Ingest, Specialize, Metrics, Instrument, Regress };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct DimensionInput {
  DimensionId id;
  DimensionKind kind = DimensionKind::Generic;
  std::filesystem::path path;
};

/// Everything a pipeline run needs. Relative paths in the JSON file are
/// resolved against the file's directory.
struct RunConfig {
  std::vector<DimensionInput> dimensions;
  std::optional<std::filesystem::path> aux;
  std::map<std::string, std::filesystem::path> series;

  bool apply_filters = true;
  EligibilityRule eligibility;
  double rca_threshold = 1.0;
  /// Any of eci, fitness, hhi, entropy, intensity.
  std::vector<std::string> metrics{"eci", "fitness", "hhi", "entropy", "intensity"};
  FitnessOptions fitness;
  int instrument_k = 3;
  std::set<Stage> stages{Stage::Ingest, Stage::Specialize, Stage::Metrics, Stage::Instrument,
                         Stage::Regress};
  std::vector<StudySpec> studies;
  /// Extra years to compute metrics for (study period starts are always included).
  std::vector<Year> years;
  std::optional<Year> cross_dimension_year;
  bool write_clean_panels = false;
  bool write_matrices = false;

  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  /// Configuration as given, echoed into the run manifest.
  nlohmann::json source;

  bool wants(Stage stage) const { return stages.count(stage) > 0; }
  std::vector<std::string> dimension_names() const;
};

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Fails fast (Config/Io errors) on missing inputs, unknown dimension
/// references, or an output directory that cannot be created.
void validate(const RunConfig& config);

}  // namespace mdc
