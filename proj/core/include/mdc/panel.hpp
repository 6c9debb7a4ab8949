#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mdc/depvar.hpp"
#include "mdc/diagnostics.hpp"
#include "mdc/series.hpp"

namespace mdc {

enum class DepvarKind { Growth, PanelAverage, EmissionIntensity };

struct DepvarSpec {
  DepvarKind kind = DepvarKind::Growth;
  /// Series for Growth (GDP per capita) and PanelAverage (e.g. Gini).
  std::string series = "gdp_pc";
  /// Inputs of EmissionIntensity.
  std::string ghg = "ghg";
  std::string gdp_pc = "gdp_pc";
  std::string population = "population";
  std::string label;
};

enum class Transform { Identity, Log, LogSquared };
/// Start: value at the period's first year. Average: mean over the period.
enum class Timing { Start, Average };

struct ControlSpec {
  std::string series;
  Transform transform = Transform::Log;
  Timing timing = Timing::Start;
  std::string label;  // generated from series/transform when empty

  std::string display() const;
};

/// One factor of a complexity term: a per-year score table `metric:dimension`.
struct Factor {
  std::string metric = "eci";
  std::string dimension;

  std::string key() const { return metric + ":" + dimension; }
  std::string display() const;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// A main effect (one factor) or an interaction (product of factors). Each
/// factor is min-max scaled over the estimation sample before the product.
struct TermSpec {
  std::vector<Factor> factors;
  /// Complexity terms are the ones tested, weighted, and reported; other
  /// metric terms (e.g. HHI in a robustness model) enter as controls.
  bool complexity = true;

  std::string display() const;
};

struct ModelSpec {
  std::string id;
  std::vector<TermSpec> terms;
  std::vector<ControlSpec> controls;  // in addition to the study baseline

  /// Main effects for `dimensions` plus the listed interactions.
  static ModelSpec from_dimensions(std::string id, const std::string& metric,
                                   const std::vector<std::string>& dimensions,
                                   const std::vector<std::vector<std::string>>& interactions = {});
};

/// Additional robustness regression: re-test the complexity terms of a model
/// after adding controls and/or a second metric for the same dimensions, or
/// with the complexity metric replaced (instrumented scores).
struct RobustnessCheck {
  std::string label;
  std::vector<ControlSpec> controls;
  std::string extra_metric;    // e.g. "hhi"; empty for none
  std::string replace_metric;  // e.g. "eci_iv"; empty for none
};

struct StudySpec {
  std::string name;
  std::string title;
  DepvarSpec depvar;
  std::vector<PanelPeriod> periods;
  std::vector<ControlSpec> baseline;
  std::vector<std::string> dimensions;
  std::string metric = "eci";
  /// Baseline model first, then candidates in table order.
  std::vector<ModelSpec> models;
  std::vector<RobustnessCheck> robustness;
  /// Extra controls of the final model (selected model + these).
  std::vector<ControlSpec> final_controls;
  double alpha = 0.05;
};

/// Named series (gdp_pc, population, gini, ...) and per-year score tables
/// keyed `metric:dimension` (eci:trade, fitness:research, eci_iv:trade, ...).
struct DataBundle {
  std::map<std::string, SeriesTable> series;
  std::map<std::string, SeriesTable> scores;

  const SeriesTable& require_series(const std::string& name) const;
  const SeriesTable& require_scores(const std::string& key) const;
};

using ObsKey = std::pair<std::string, std::string>;  // (economy, period label)

enum class RegressorRole { Intercept, PeriodEffect, Control, Complexity };

/// Regression-ready observations: y, design matrix, and column metadata.
struct PanelDataset {
  std::string spec_id;
  std::string depvar;
  std::vector<std::string> economies;  // per observation
  std::vector<std::string> periods;    // per observation
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> names;
  std::vector<RegressorRole> roles;

  Eigen::Index n_obs() const noexcept { return X.rows(); }
  Eigen::Index n_params() const noexcept { return X.cols(); }
  std::optional<Eigen::Index> column(std::string_view name) const;
  std::vector<ObsKey> keys() const;

  PanelDataset without(const std::vector<std::string>& drop) const;
  PanelDataset with_column(std::string name, RegressorRole role, const Eigen::VectorXd& values) const;
};

/// Observations for which y and every regressor of `model` are available.
std::set<ObsKey> available_sample(const StudySpec& study, const ModelSpec& model,
                                  const DataBundle& data);

/// Builds the listwise-complete panel of `model` (optionally restricted to
/// `sample`). Metric factors are min-max scaled over the sample per key;
/// instrumented factors (metric ending in "_iv") reuse the scaling of their
/// base metric. Adds an intercept and one dummy per non-reference period.
/// Throws Rank naming the collinear columns when the design is deficient.
PanelDataset build_panel(const StudySpec& study, const ModelSpec& model, const DataBundle& data,
                         const std::set<ObsKey>* sample = nullptr, Warnings* warnings = nullptr);

/// Names of design columns that are linearly dependent on earlier columns
/// (empty when the design has full column rank).
std::vector<std::string> collinear_columns(const PanelDataset& panel);

}  // namespace mdc
