#include "mdc/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <fmt/format.h>

#include "mdc/error.hpp"

namespace mdc {

namespace {

std::string series_label(const std::string& series) {
  if (series == "gdp_pc") return "GDP pc";
  std::string out = series;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string metric_label(const std::string& metric) {
  if (metric == "eci") return "ECI";
  if (metric == "eci_iv") return "Instrumented ECI";
  if (metric == "fitness") return "Fitness";
  if (metric == "log_fitness") return "Log of Fitness";
  if (metric == "hhi") return "HHI";
  if (metric == "entropy") return "Entropy";
  if (metric == "intensity") return "Intensity";
  return metric;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string base_metric(const std::string& metric) {
  constexpr std::string_view suffix = "_iv";
  if (metric.size() > suffix.size() && metric.ends_with(suffix))
    return metric.substr(0, metric.size() - suffix.size());
  return {};
}

const PanelPeriod* find_period(const StudySpec& study, const std::string& label) {
  for (const auto& p : study.periods)
    if (p.label == label) return &p;
  return nullptr;
}

std::map<ObsKey, double> depvar_values(const StudySpec& study, const DataBundle& data,
                                       Warnings* warnings) {
  std::map<ObsKey, double> out;
  switch (study.depvar.kind) {
    case DepvarKind::Growth: {
      const auto& gdp = data.require_series(study.depvar.series);
      for (const auto& p : study.periods)
        for (const auto& [economy, g] : growth_depvar(gdp, p.start, p.end - p.start, warnings))
          out[{economy, p.label}] = g;
      break;
    }
    case DepvarKind::PanelAverage:
      out = panel_average_depvar(data.require_series(study.depvar.series), study.periods, warnings);
      break;
    case DepvarKind::EmissionIntensity: {
      const auto yearly = emission_intensity_depvar(data.require_series(study.depvar.ghg),
                                                    data.require_series(study.depvar.gdp_pc),
                                                    data.require_series(study.depvar.population),
                                                    warnings);
      out = panel_average_depvar(yearly, study.periods, warnings);
      break;
    }
  }
  return out;
}

double control_value(const ControlSpec& c, const SeriesTable& series, const std::string& economy,
                     const PanelPeriod& period) {
  double raw = kNaN;
  if (c.timing == Timing::Start) {
    if (auto v = series.get(economy, period.start)) raw = *v;
  } else {
    const auto values = series.range(economy, period.start, period.end);
    if (!values.empty()) {
      raw = 0.0;
      for (double v : values) raw += v;
      raw /= static_cast<double>(values.size());
    }
  }
  if (std::isnan(raw)) return kNaN;
  switch (c.transform) {
    case Transform::Identity: return raw;
    case Transform::Log: return raw > 0.0 ? std::log(raw) : kNaN;
    case Transform::LogSquared: {
      if (!(raw > 0.0)) return kNaN;
      const double l = std::log(raw);
      return l * l;
    }
  }
  return kNaN;
}

double factor_raw(const SeriesTable& scores, const std::string& economy, const PanelPeriod& period) {
  auto v = scores.get(economy, period.start);
  return v ? *v : kNaN;
}

std::vector<const ControlSpec*> all_controls(const StudySpec& study, const ModelSpec& model) {
  std::vector<const ControlSpec*> out;
  for (const auto& c : study.baseline) out.push_back(&c);
  for (const auto& c : model.controls) out.push_back(&c);
  return out;
}

std::vector<Factor> distinct_factors(const ModelSpec& model) {
  std::vector<Factor> out;
  for (const auto& t : model.terms)
    for (const auto& f : t.factors)
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  return out;
}

}  // namespace

std::string ControlSpec::display() const {
  if (!label.empty()) return label;
  switch (transform) {
    case Transform::Identity: return series_label(series);
    case Transform::Log: return "Log of " + series_label(series);
    case Transform::LogSquared: return "Log of " + series_label(series) + " squared";
  }
  return series;
}

std::string Factor::display() const { return fmt::format("{} ({})", metric_label(metric), dimension); }

std::string TermSpec::display() const {
  std::string out;
  for (const auto& f : factors) {
    if (!out.empty()) out += " x ";
    out += f.display();
  }
  return out;
}

ModelSpec ModelSpec::from_dimensions(std::string id, const std::string& metric,
                                     const std::vector<std::string>& dimensions,
                                     const std::vector<std::vector<std::string>>& interactions) {
  ModelSpec m;
  m.id = std::move(id);
  for (const auto& d : dimensions) m.terms.push_back(TermSpec{{Factor{metric, d}}, true});
  for (const auto& group : interactions) {
    if (group.size() < 2) throw Error(ErrorKind::Specification, "an interaction needs at least two dimensions");
    TermSpec t;
    for (const auto& d : group) t.factors.push_back(Factor{metric, d});
    m.terms.push_back(std::move(t));
  }
  return m;
}

const SeriesTable& DataBundle::require_series(const std::string& name) const {
  auto it = series.find(name);
  if (it == series.end()) throw Error(ErrorKind::Config, "missing series '" + name + "'");
  return it->second;
}

const SeriesTable& DataBundle::require_scores(const std::string& key) const {
  auto it = scores.find(key);
  if (it == scores.end()) throw Error(ErrorKind::Config, "missing score table '" + key + "'");
  return it->second;
}

std::optional<Eigen::Index> PanelDataset::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

std::vector<ObsKey> PanelDataset::keys() const {
  std::vector<ObsKey> out;
  out.reserve(economies.size());
  for (std::size_t i = 0; i < economies.size(); ++i) out.emplace_back(economies[i], periods[i]);
  return out;
}

PanelDataset PanelDataset::without(const std::vector<std::string>& drop) const {
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (std::find(drop.begin(), drop.end(), names[i]) == drop.end()) keep.push_back(static_cast<Eigen::Index>(i));
  for (const auto& d : drop)
    if (!column(d)) throw Error(ErrorKind::Specification, "no regressor named '" + d + "'");
  PanelDataset out = *this;
  out.X = X(Eigen::all, keep);
  out.names.clear();
  out.roles.clear();
  for (auto i : keep) {
    out.names.push_back(names[static_cast<std::size_t>(i)]);
    out.roles.push_back(roles[static_cast<std::size_t>(i)]);
  }
  return out;
}

PanelDataset PanelDataset::with_column(std::string name, RegressorRole role,
                                       const Eigen::VectorXd& values) const {
  if (values.size() != X.rows()) throw Error(ErrorKind::Specification, "column length does not match the panel");
  if (column(name)) throw Error(ErrorKind::Specification, "duplicate regressor '" + name + "'");
  PanelDataset out = *this;
  out.X.conservativeResize(Eigen::NoChange, X.cols() + 1);
  out.X.col(X.cols()) = values;
  out.names.push_back(std::move(name));
  out.roles.push_back(role);
  return out;
}

std::set<ObsKey> available_sample(const StudySpec& study, const ModelSpec& model,
                                  const DataBundle& data) {
  const auto y = depvar_values(study, data, nullptr);
  const auto controls = all_controls(study, model);
  const auto factors = distinct_factors(model);
  std::set<ObsKey> out;
  for (const auto& [key, value] : y) {
    const PanelPeriod* period = find_period(study, key.second);
    if (!period || !std::isfinite(value)) continue;
    bool ok = true;
    for (const auto* c : controls)
      ok = ok && std::isfinite(control_value(*c, data.require_series(c->series), key.first, *period));
    for (const auto& f : factors)
      ok = ok && std::isfinite(factor_raw(data.require_scores(f.key()), key.first, *period));
    if (ok) out.insert(key);
  }
  return out;
}

PanelDataset build_panel(const StudySpec& study, const ModelSpec& model, const DataBundle& data,
                         const std::set<ObsKey>* sample, Warnings* warnings) {
  if (study.periods.empty()) throw Error(ErrorKind::Specification, "study has no periods");
  std::set<ObsKey> rows = available_sample(study, model, data);
  if (sample) {
    std::set<ObsKey> restricted;
    std::size_t missing = 0;
    for (const auto& k : *sample) {
      if (rows.count(k))
        restricted.insert(k);
      else
        ++missing;
    }
    if (missing)
      warn(warnings, fmt::format("model {}: {} sample observations lack regressors and are dropped",
                                 model.id, missing));
    rows = std::move(restricted);
  }
  if (rows.empty()) throw Error(ErrorKind::Specification, fmt::format("model {}: no complete observations", model.id));

  const auto y = depvar_values(study, data, nullptr);
  const auto controls = all_controls(study, model);
  const auto factors = distinct_factors(model);

  // Periods present, in study order; the first is the reference.
  std::vector<std::string> present;
  for (const auto& p : study.periods)
    if (std::any_of(rows.begin(), rows.end(), [&](const ObsKey& k) { return k.second == p.label; }))
      present.push_back(p.label);

  // Pooled min-max range per factor; instrumented factors share their base range.
  std::map<std::string, std::pair<double, double>> range;
  auto pooled = [&](const SeriesTable& scores) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& k : rows) {
      const double v = factor_raw(scores, k.first, *find_period(study, k.second));
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  };
  for (const auto& f : factors) {
    const std::string base = base_metric(f.metric);
    const std::string base_key = base.empty() ? std::string{} : base + ":" + f.dimension;
    if (!base.empty() && data.scores.count(base_key)) {
      range[f.key()] = pooled(data.scores.at(base_key));
    } else {
      if (!base.empty())
        warn(warnings, fmt::format("no '{}' scores; '{}' scaled over its own range", base_key, f.key()));
      range[f.key()] = pooled(data.require_scores(f.key()));
    }
    const auto [lo, hi] = range[f.key()];
    if (!(hi > lo))
      throw Error(ErrorKind::Degenerate,
                  fmt::format("model {}: '{}' is constant over the sample", model.id, f.key()));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(1 + model.terms.size() + controls.size() + present.size() - 1);
  PanelDataset out;
  out.spec_id = model.id;
  out.depvar = study.depvar.label;
  out.y.resize(n);
  out.X.resize(n, k);

  out.names.push_back("Intercept");
  out.roles.push_back(RegressorRole::Intercept);
  for (const auto& t : model.terms) {
    if (t.factors.empty()) throw Error(ErrorKind::Specification, fmt::format("model {}: empty term", model.id));
    out.names.push_back(t.display());
    out.roles.push_back(t.complexity ? RegressorRole::Complexity : RegressorRole::Control);
  }
  for (const auto* c : controls) {
    out.names.push_back(c->display());
    out.roles.push_back(RegressorRole::Control);
  }
  for (std::size_t p = 1; p < present.size(); ++p) {
    out.names.push_back("Period " + present[p]);
    out.roles.push_back(RegressorRole::PeriodEffect);
  }
  for (std::size_t i = 0; i < out.names.size(); ++i)
    for (std::size_t j = i + 1; j < out.names.size(); ++j)
      if (out.names[i] == out.names[j])
        throw Error(ErrorKind::Specification,
                    fmt::format("model {}: regressor '{}' appears twice", model.id, out.names[i]));

  Eigen::Index row = 0;
  for (const auto& key : rows) {
    const PanelPeriod& period = *find_period(study, key.second);
    out.economies.push_back(key.first);
    out.periods.push_back(key.second);
    out.y[row] = y.at(key);
    Eigen::Index col = 0;
    out.X(row, col++) = 1.0;
    for (const auto& t : model.terms) {
      double product = 1.0;
      for (const auto& f : t.factors) {
        const auto [lo, hi] = range.at(f.key());
        product *= (factor_raw(data.require_scores(f.key()), key.first, period) - lo) / (hi - lo);
      }
      out.X(row, col++) = product;
    }
    for (const auto* c : controls)
      out.X(row, col++) = control_value(*c, data.require_series(c->series), key.first, period);
    for (std::size_t p = 1; p < present.size(); ++p) out.X(row, col++) = key.second == present[p] ? 1.0 : 0.0;
    ++row;
  }

  const auto collinear = collinear_columns(out);
  if (!collinear.empty()) {
    std::string names;
    for (const auto& c : collinear) names += (names.empty() ? "" : ", ") + c;
    throw Error(ErrorKind::Rank, fmt::format("model {}: rank-deficient design; collinear columns: {}", model.id, names));
  }
  return out;
}

std::vector<std::string> collinear_columns(const PanelDataset& panel) {
  std::vector<std::string> out;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < panel.X.cols(); ++j) {
    const double norm = panel.X.col(j).norm();
    if (!(norm > 0.0)) {
      out.push_back(panel.names[static_cast<std::size_t>(j)]);
      continue;
    }
    std::vector<Eigen::Index> trial = kept;
    trial.push_back(j);
    Eigen::MatrixXd block = panel.X(Eigen::all, trial);
    for (Eigen::Index c = 0; c < block.cols(); ++c) block.col(c).normalize();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(block);
    qr.setThreshold(1e-10);
    if (qr.rank() == static_cast<Eigen::Index>(trial.size()))
      kept.push_back(j);
    else
      out.push_back(panel.names[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace mdc
