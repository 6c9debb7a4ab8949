#pragma once

#include <random>
#include <string>
#include <vector>

#include "mdc/panel.hpp"
#include "mdc/study.hpp"

namespace fixtures {

/// Panel with an intercept column followed by the given regressors.
inline mdc::PanelDataset panel(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& y,
                               std::vector<std::string> names = {},
                               std::vector<mdc::RegressorRole> roles = {}, std::string id = "m") {
  mdc::PanelDataset p;
  p.spec_id = std::move(id);
  p.y = y;
  p.X.resize(regressors.rows(), regressors.cols() + 1);
  p.X.col(0).setOnes();
  p.X.rightCols(regressors.cols()) = regressors;
  p.names.push_back("Intercept");
  p.roles.push_back(mdc::RegressorRole::Intercept);
  for (Eigen::Index j = 0; j < regressors.cols(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    p.names.push_back(i < names.size() ? names[i] : "x" + std::to_string(j + 1));
    p.roles.push_back(i < roles.size() ? roles[i] : mdc::RegressorRole::Complexity);
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    p.economies.push_back("e" + std::to_string(1000 + i));
    p.periods.push_back("p");
  }
  return p;
}

inline Eigen::MatrixXd normal_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// A study with a growth dependent variable over two disjoint periods, a log GDP
/// baseline, and the standard models over `dims`.
inline mdc::StudySpec two_period_growth(const std::vector<std::string>& dims) {
  mdc::StudySpec s = mdc::growth_study(dims);
  s.periods = {{"t0", 2000, 2010}, {"t1", 2011, 2021}};
  s.robustness.clear();
  s.final_controls.clear();
  return s;
}

/// Planted growth data: `economies` x two periods with correlated ECIs in
/// three dimensions; y = 2 - 1.5 (log GDP - 9) + sum beta_i term_i + 0.5 t +
/// noise, where the terms are min-max scaled ECI (trade), ECI (technology),
/// and their product.
struct PlantedOptions {
  int economies = 150;
  double rho = 0.7;
  double beta_trade = 12.0;
  double beta_technology = 12.0;
  double beta_interaction = -20.0;
  double noise = 1.75;
};

inline mdc::DataBundle planted_growth(std::uint64_t seed, const PlantedOptions& o = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  mdc::DataBundle data;
  auto& gdp = data.series["gdp_pc"];
  auto& trade = data.scores["eci:trade"];
  auto& tech = data.scores["eci:technology"];
  auto& research = data.scores["eci:research"];
  const int years[] = {2000, 2011};
  struct Row { std::string code; double lg, e0, e1, e2; int t; };
  std::vector<Row> rows;
  for (int c = 0; c < o.economies; ++c) {
    const double lg = 9.0 + n(rng);
    for (int t = 0; t < 2; ++t) {
      const double common = 0.6 * (lg - 9.0);
      const double e0 = common + n(rng);
      const double e1 = o.rho * e0 + std::sqrt(1 - o.rho * o.rho) * n(rng) + 0.3 * (lg - 9.0);
      const double e2 = o.rho * e0 + std::sqrt(1 - o.rho * o.rho) * n(rng);
      rows.push_back({"c" + std::to_string(1000 + c), lg + 0.1 * t, e0, e1, e2, t});
    }
  }
  auto range = [&](auto field) {
    double lo = 1e300, hi = -1e300;
    for (const auto& r : rows) {
      lo = std::min(lo, r.*field);
      hi = std::max(hi, r.*field);
    }
    return std::pair{lo, hi};
  };
  const auto r0 = range(&Row::e0), r1 = range(&Row::e1);
  // The final GDP level is chosen so that the growth formula returns y.
  for (const auto& r : rows) {
    const double s0 = (r.e0 - r0.first) / (r0.second - r0.first);
    const double s1 = (r.e1 - r1.first) / (r1.second - r1.first);
    const double y = 2.0 - 1.5 * (r.lg - 9.0) + o.beta_trade * s0 + o.beta_technology * s1 +
                     o.beta_interaction * s0 * s1 + 0.5 * r.t + o.noise * n(rng);
    const int start = years[r.t];
    gdp.set(r.code, start, std::exp(r.lg));
    gdp.set(r.code, start + 10, std::exp(r.lg + y * 10.0 / 100.0));
    trade.set(r.code, start, r.e0);
    tech.set(r.code, start, r.e1);
    research.set(r.code, start, r.e2);
  }
  return data;
}

}  // namespace fixtures
