#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mdc/panel.hpp"

namespace mdc {

/// Ordinary least squares fit with classical (homoskedastic) standard errors.
struct RegressionFit {
  std::string spec_id;
  std::vector<std::string> names;
  std::vector<RegressorRole> roles;
  std::vector<ObsKey> keys;
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  double tss = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  Eigen::Index n_obs = 0;
  Eigen::Index n_params = 0;
  /// Exact fit: residual sum of squares is zero to rounding; SEs are set to 0.
  bool degenerate = false;

  Eigen::Index df_resid() const noexcept { return n_obs - n_params; }
  std::optional<Eigen::Index> index(std::string_view name) const;
  double coefficient(std::string_view name) const;
  double std_error(std::string_view name) const;
  double t_stat(Eigen::Index i) const;
  double p_value(Eigen::Index i) const;
};

RegressionFit ols(const PanelDataset& panel);

struct WaldResult {
  double f = 0.0;
  int df_num = 0;
  int df_den = 0;
  double p_value = 1.0;
  /// The unrestricted model fits exactly; f is reported as kMaxF.
  bool capped = false;

  static constexpr double kMaxF = 1e12;
};

/// F test of the coefficients present in `unrestricted` but not in
/// `restricted`. Both fits must use the same observations, and the restricted
/// regressors must be a subset of the unrestricted ones.
WaldResult wald_f(const RegressionFit& unrestricted, const RegressionFit& restricted);

/// Sum over complexity terms of coefficient x regressor value, per observation.
Eigen::VectorXd composite_eci(const RegressionFit& fit, const PanelDataset& panel);

struct ConditionalCorrelation {
  std::string target;
  Eigen::VectorXd y_residuals;
  Eigen::VectorXd target_residuals;
  double correlation = 0.0;
  /// Slope of y residuals on target residuals (equals the full-model coefficient).
  double slope = 0.0;
};

/// Partials y and `target` on all other regressors and correlates the residuals.
ConditionalCorrelation conditional_correlation(const PanelDataset& panel, std::string_view target);

}  // namespace mdc
