#include "mdc/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <fmt/format.h>

#include "mdc/error.hpp"
#include "mdc/stats.hpp"

namespace mdc {

namespace {

constexpr double kExactFit = 1e-20;

void require_full_rank(const PanelDataset& panel) {
  if (panel.n_obs() <= panel.n_params())
    throw Error(ErrorKind::Specification,
                fmt::format("model {}: {} observations for {} parameters", panel.spec_id,
                            panel.n_obs(), panel.n_params()));
  const auto collinear = collinear_columns(panel);
  if (!collinear.empty()) {
    std::string names;
    for (const auto& c : collinear) names += (names.empty() ? "" : ", ") + c;
    throw Error(ErrorKind::Rank,
                fmt::format("model {}: rank-deficient design; collinear columns: {}", panel.spec_id, names));
  }
}

Eigen::VectorXd residualize(const Eigen::MatrixXd& x, const Eigen::VectorXd& v) {
  if (x.cols() == 0) return v;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  return v - x * qr.solve(v);
}

}  // namespace

std::optional<Eigen::Index> RegressionFit::index(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

double RegressionFit::coefficient(std::string_view name) const {
  auto i = index(name);
  if (!i) throw Error(ErrorKind::Specification, fmt::format("model {}: no regressor '{}'", spec_id, name));
  return coef[*i];
}

double RegressionFit::std_error(std::string_view name) const {
  auto i = index(name);
  if (!i) throw Error(ErrorKind::Specification, fmt::format("model {}: no regressor '{}'", spec_id, name));
  return se[*i];
}

double RegressionFit::t_stat(Eigen::Index i) const {
  if (se[i] > 0.0) return coef[i] / se[i];
  if (coef[i] == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), coef[i]);
}

double RegressionFit::p_value(Eigen::Index i) const {
  const double t = t_stat(i);
  if (std::isinf(t)) return 0.0;
  return stats::t_two_sided_p(t, static_cast<double>(df_resid()));
}

RegressionFit ols(const PanelDataset& panel) {
  require_full_rank(panel);
  const Eigen::Index n = panel.n_obs();
  const Eigen::Index k = panel.n_params();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(panel.X);
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd qty = (qr.householderQ().transpose() * panel.y).head(k);

  RegressionFit fit;
  fit.spec_id = panel.spec_id;
  fit.names = panel.names;
  fit.roles = panel.roles;
  fit.keys = panel.keys();
  fit.coef = r.triangularView<Eigen::Upper>().solve(qty);
  fit.fitted = panel.X * fit.coef;
  fit.residuals = panel.y - fit.fitted;
  fit.rss = fit.residuals.squaredNorm();
  fit.tss = (panel.y.array() - panel.y.mean()).square().sum();
  fit.n_obs = n;
  fit.n_params = k;
  if (!(fit.tss > 0.0))
    throw Error(ErrorKind::Degenerate, fmt::format("model {}: dependent variable is constant", panel.spec_id));

  fit.degenerate = fit.rss <= kExactFit * fit.tss;
  fit.r2 = fit.degenerate ? 1.0 : 1.0 - fit.rss / fit.tss;
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / static_cast<double>(n - k);

  if (fit.degenerate) {
    fit.se = Eigen::VectorXd::Zero(k);
  } else {
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const double s2 = fit.rss / static_cast<double>(n - k);
    fit.se = (r_inv * r_inv.transpose()).diagonal().cwiseMax(0.0).cwiseSqrt() * std::sqrt(s2);
  }
  return fit;
}

WaldResult wald_f(const RegressionFit& unrestricted, const RegressionFit& restricted) {
  auto sorted_keys = [](std::vector<ObsKey> keys) {
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  if (sorted_keys(unrestricted.keys) != sorted_keys(restricted.keys))
    throw Error(ErrorKind::Specification,
                fmt::format("models {} and {} use different observations", unrestricted.spec_id,
                            restricted.spec_id));
  for (const auto& name : restricted.names)
    if (!unrestricted.index(name))
      throw Error(ErrorKind::Specification,
                  fmt::format("model {} is not nested in {} ('{}' missing)", restricted.spec_id,
                              unrestricted.spec_id, name));

  WaldResult w;
  w.df_num = static_cast<int>(unrestricted.n_params - restricted.n_params);
  w.df_den = static_cast<int>(unrestricted.df_resid());
  if (w.df_num == 0) return w;

  const double gain = restricted.rss - unrestricted.rss;
  if (unrestricted.degenerate) {
    if (gain > kExactFit * unrestricted.tss) {
      w.f = WaldResult::kMaxF;
      w.p_value = 0.0;
      w.capped = true;
    }
    return w;
  }
  w.f = std::max(0.0, (gain / w.df_num) / (unrestricted.rss / w.df_den));
  if (w.f > WaldResult::kMaxF) {
    w.f = WaldResult::kMaxF;
    w.capped = true;
  }
  w.p_value = stats::f_survival(w.f, w.df_num, w.df_den);
  return w;
}

Eigen::VectorXd composite_eci(const RegressionFit& fit, const PanelDataset& panel) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(panel.n_obs());
  int terms = 0;
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    if (fit.roles[i] != RegressorRole::Complexity) continue;
    auto col = panel.column(fit.names[i]);
    if (!col) throw Error(ErrorKind::Specification, fmt::format("panel lacks regressor '{}'", fit.names[i]));
    out += fit.coef[static_cast<Eigen::Index>(i)] * panel.X.col(*col);
    ++terms;
  }
  if (terms == 0)
    throw Error(ErrorKind::Specification, fmt::format("model {} has no complexity terms", fit.spec_id));
  return out;
}

ConditionalCorrelation conditional_correlation(const PanelDataset& panel, std::string_view target) {
  const auto col = panel.column(target);
  if (!col) throw Error(ErrorKind::Specification, fmt::format("panel lacks regressor '{}'", target));
  require_full_rank(panel);
  const PanelDataset others = panel.without({std::string(target)});

  ConditionalCorrelation out;
  out.target = std::string(target);
  out.y_residuals = residualize(others.X, panel.y);
  out.target_residuals = residualize(others.X, panel.X.col(*col));
  const auto n = static_cast<std::size_t>(panel.n_obs());
  out.correlation = stats::pearson({out.y_residuals.data(), n}, {out.target_residuals.data(), n});
  out.slope = out.target_residuals.dot(out.y_residuals) / out.target_residuals.squaredNorm();
  return out;
}

}  // namespace mdc
