#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mdc/diagnostics.hpp"
#include "mdc/panel.hpp"
#include "mdc/regression.hpp"
#include "mdc/selection.hpp"

namespace mdc {

/// Baseline model "(1)" followed by every non-empty subset of `dimensions`
/// without interactions (by size), each pair with its interaction, and, for
/// three or more dimensions, the full model with every interaction.
std::vector<ModelSpec> standard_models(const std::vector<std::string>& dimensions,
                                       const std::string& metric = "eci");

/// Growth: 10-year annualized GDP pc growth, 1999-2009 and 2009-2019,
/// baseline log initial GDP pc.
StudySpec growth_study(const std::vector<std::string>& dimensions);
/// Inequality: mean Gini over 1996-99 ... 2012-15, baseline log GDP pc and its square.
StudySpec inequality_study(const std::vector<std::string>& dimensions);
/// Emissions: mean log emission intensity over 1996-99 ... 2016-18, baseline log GDP pc.
StudySpec emissions_study(const std::vector<std::string>& dimensions);

/// Parses one study block of a run configuration (see README for the grammar).
StudySpec parse_study(const nlohmann::json& j, const std::vector<std::string>& default_dimensions);

struct RobustnessRow {
  std::string label;
  std::map<std::string, WaldResult> by_model;  // model id -> F of its complexity terms
};

struct FinalModel {
  PanelDataset panel;
  RegressionFit fit;
  Eigen::VectorXd composite;
  PanelDataset composite_panel;
  RegressionFit composite_fit;
  ConditionalCorrelation conditional;
};

struct StudyResult {
  StudySpec spec;
  std::set<ObsKey> sample;
  std::vector<PanelDataset> panels;  // spec.models order; [0] is the baseline
  SelectionResult selection;
  std::vector<RobustnessRow> robustness;
  std::optional<FinalModel> final_model;
};

/// Estimates every model of the study on their common listwise sample, runs
/// model selection, the robustness F tests, and the composite-score model.
StudyResult run_study(const StudySpec& study, const DataBundle& data, Warnings* warnings = nullptr);

}  // namespace mdc
