#include "mdc/study.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mdc/error.hpp"

namespace mdc {

namespace {

using nlohmann::json;

std::vector<std::vector<std::string>> subsets_of_size(const std::vector<std::string>& items, std::size_t k) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k == 0 || k > items.size()) return out;
  while (true) {
    std::vector<std::string> s;
    for (auto i : idx) s.push_back(items[i]);
    out.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

ControlSpec log_of(std::string series) { return ControlSpec{std::move(series), Transform::Log, Timing::Start, {}}; }

std::vector<PanelPeriod> four_year_panels(bool with_last) {
  std::vector<PanelPeriod> out;
  for (Year start = 1996; start <= 2012; start += 4)
    out.push_back({fmt::format("{}-{}", start, start + 3), start, start + 3});
  if (with_last) out.push_back({"2016-2018", 2016, 2018});
  return out;
}

std::vector<RobustnessCheck> standard_robustness() {
  return {
      {"Population and human capital", {log_of("population"), log_of("human_capital")}, {}, {}},
      {"Intensity", {}, "intensity", {}},
      {"Entropy", {}, "entropy", {}},
      {"HHI", {}, "hhi", {}},
      {"Log of Fitness", {}, "log_fitness", {}},
      {"Instrumented", {}, {}, "eci_iv"},
  };
}

}  // namespace

std::vector<ModelSpec> standard_models(const std::vector<std::string>& dimensions, const std::string& metric) {
  std::vector<ModelSpec> out;
  auto next_id = [&] { return fmt::format("({})", out.size() + 1); };
  out.push_back(ModelSpec{next_id(), {}, {}});
  for (std::size_t k = 1; k <= dimensions.size(); ++k)
    for (const auto& subset : subsets_of_size(dimensions, k))
      out.push_back(ModelSpec::from_dimensions(next_id(), metric, subset));
  for (const auto& pair : subsets_of_size(dimensions, 2))
    out.push_back(ModelSpec::from_dimensions(next_id(), metric, pair, {pair}));
  if (dimensions.size() >= 3) {
    std::vector<std::vector<std::string>> interactions;
    for (std::size_t k = 2; k <= dimensions.size(); ++k)
      for (auto& s : subsets_of_size(dimensions, k)) interactions.push_back(std::move(s));
    out.push_back(ModelSpec::from_dimensions(next_id(), metric, dimensions, interactions));
  }
  return out;
}

StudySpec growth_study(const std::vector<std::string>& dimensions) {
  StudySpec s;
  s.name = "growth";
  s.title = "Economic growth";
  s.depvar = DepvarSpec{DepvarKind::Growth, "gdp_pc", "ghg", "gdp_pc", "population", "Annual GDP pc growth"};
  s.periods = {{"1999-2009", 1999, 2009}, {"2009-2019", 2009, 2019}};
  s.baseline = {log_of("gdp_pc")};
  s.dimensions = dimensions;
  s.models = standard_models(dimensions, s.metric);
  s.robustness = standard_robustness();
  s.final_controls = {log_of("human_capital")};
  return s;
}

StudySpec inequality_study(const std::vector<std::string>& dimensions) {
  StudySpec s;
  s.name = "inequality";
  s.title = "Income inequality";
  s.depvar = DepvarSpec{DepvarKind::PanelAverage, "gini", "ghg", "gdp_pc", "population", "Gini"};
  s.periods = four_year_panels(false);
  s.baseline = {log_of("gdp_pc"), ControlSpec{"gdp_pc", Transform::LogSquared, Timing::Start, {}}};
  s.dimensions = dimensions;
  s.models = standard_models(dimensions, s.metric);
  s.robustness = standard_robustness();
  s.final_controls = {log_of("population"), log_of("human_capital")};
  return s;
}

StudySpec emissions_study(const std::vector<std::string>& dimensions) {
  StudySpec s;
  s.name = "emissions";
  s.title = "Emission intensity";
  s.depvar = DepvarSpec{DepvarKind::EmissionIntensity, "ghg", "ghg", "gdp_pc", "population",
                        "Log of emission intensity"};
  s.periods = four_year_panels(true);
  s.baseline = {log_of("gdp_pc")};
  s.dimensions = dimensions;
  s.models = standard_models(dimensions, s.metric);
  s.robustness = standard_robustness();
  s.final_controls = {log_of("population"), log_of("human_capital")};
  return s;
}

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, fmt::format("{}: expected an object", where));
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorKind::Config, fmt::format("{}: unknown key '{}'", where, key));
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Config, fmt::format("'{}' has the wrong type", key));
  }
}

ControlSpec parse_control(const json& j) {
  if (j.is_string()) return log_of(j.get<std::string>());
  check_keys(j, {"series", "transform", "timing", "label"}, "control");
  ControlSpec c;
  c.series = get_or<std::string>(j, "series", "");
  if (c.series.empty()) throw Error(ErrorKind::Config, "control: 'series' is required");
  const auto transform = get_or<std::string>(j, "transform", "log");
  if (transform == "log")
    c.transform = Transform::Log;
  else if (transform == "log_squared")
    c.transform = Transform::LogSquared;
  else if (transform == "identity")
    c.transform = Transform::Identity;
  else
    throw Error(ErrorKind::Config, "control: unknown transform '" + transform + "'");
  const auto timing = get_or<std::string>(j, "timing", "start");
  if (timing == "start")
    c.timing = Timing::Start;
  else if (timing == "average")
    c.timing = Timing::Average;
  else
    throw Error(ErrorKind::Config, "control: unknown timing '" + timing + "'");
  c.label = get_or<std::string>(j, "label", "");
  return c;
}

std::vector<ControlSpec> parse_controls(const json& j, const char* key, std::vector<ControlSpec> fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_array()) throw Error(ErrorKind::Config, fmt::format("'{}' must be an array", key));
  std::vector<ControlSpec> out;
  for (const auto& c : *it) out.push_back(parse_control(c));
  return out;
}

DepvarSpec parse_depvar(const json& j, DepvarSpec d) {
  check_keys(j, {"kind", "series", "ghg", "gdp_pc", "population", "label"}, "depvar");
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "growth")
      d.kind = DepvarKind::Growth;
    else if (kind == "panel_average")
      d.kind = DepvarKind::PanelAverage;
    else if (kind == "emission_intensity")
      d.kind = DepvarKind::EmissionIntensity;
    else
      throw Error(ErrorKind::Config, "depvar: unknown kind '" + kind + "'");
  }
  d.series = get_or(j, "series", d.series);
  d.ghg = get_or(j, "ghg", d.ghg);
  d.gdp_pc = get_or(j, "gdp_pc", d.gdp_pc);
  d.population = get_or(j, "population", d.population);
  d.label = get_or(j, "label", d.label);
  if (d.label.empty()) d.label = d.kind == DepvarKind::Growth ? "Annual GDP pc growth" : d.series;
  return d;
}

std::vector<PanelPeriod> parse_periods(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Config, "'periods' must be a non-empty array");
  std::vector<PanelPeriod> out;
  for (const auto& p : j) {
    PanelPeriod period;
    if (p.is_array() && p.size() == 2) {
      period.start = p[0].get<Year>();
      period.end = p[1].get<Year>();
    } else {
      check_keys(p, {"label", "start", "end"}, "period");
      if (!p.contains("start") || !p.contains("end"))
        throw Error(ErrorKind::Config, "period: 'start' and 'end' are required");
      period.start = p.at("start").get<Year>();
      period.end = p.at("end").get<Year>();
      period.label = get_or<std::string>(p, "label", "");
    }
    if (period.end <= period.start) throw Error(ErrorKind::Config, "period: 'end' must follow 'start'");
    if (period.label.empty()) period.label = fmt::format("{}-{}", period.start, period.end);
    out.push_back(std::move(period));
  }
  return out;
}

ModelSpec parse_model(const json& j, const std::string& metric, std::size_t position) {
  check_keys(j, {"id", "dimensions", "interactions", "controls", "metric"}, "model");
  const auto dims = get_or<std::vector<std::string>>(j, "dimensions", {});
  const auto interactions = get_or<std::vector<std::vector<std::string>>>(j, "interactions", {});
  auto m = ModelSpec::from_dimensions(get_or<std::string>(j, "id", fmt::format("({})", position)),
                                      get_or(j, "metric", metric), dims, interactions);
  m.controls = parse_controls(j, "controls", {});
  return m;
}

void check_dimensions(const StudySpec& s) {
  auto known = [&](const std::string& d) {
    return std::find(s.dimensions.begin(), s.dimensions.end(), d) != s.dimensions.end();
  };
  for (const auto& m : s.models)
    for (const auto& t : m.terms)
      for (const auto& f : t.factors)
        if (!known(f.dimension))
          throw Error(ErrorKind::Config,
                      fmt::format("study {}: model {} uses unknown dimension '{}'", s.name, m.id, f.dimension));
}

}  // namespace

StudySpec parse_study(const json& j, const std::vector<std::string>& default_dimensions) {
  check_keys(j,
             {"preset", "name", "title", "dimensions", "metric", "alpha", "depvar", "periods", "baseline",
              "models", "robustness", "final_controls"},
             "study");
  const auto dims = get_or(j, "dimensions", default_dimensions);
  const auto preset = get_or<std::string>(j, "preset", "");
  StudySpec s;
  if (preset == "growth")
    s = growth_study(dims);
  else if (preset == "inequality")
    s = inequality_study(dims);
  else if (preset == "emissions")
    s = emissions_study(dims);
  else if (!preset.empty())
    throw Error(ErrorKind::Config, "study: unknown preset '" + preset + "'");
  else
    s.dimensions = dims;

  s.name = get_or(j, "name", s.name);
  if (s.name.empty()) throw Error(ErrorKind::Config, "study: 'name' is required without a preset");
  s.title = get_or(j, "title", s.title.empty() ? s.name : s.title);
  s.alpha = get_or(j, "alpha", s.alpha);
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw Error(ErrorKind::Config, "study: alpha must lie in (0, 1)");
  const auto metric = get_or(j, "metric", s.metric);
  if (j.contains("depvar")) s.depvar = parse_depvar(j.at("depvar"), s.depvar);
  if (preset.empty() && !j.contains("depvar")) throw Error(ErrorKind::Config, "study: 'depvar' is required");
  if (j.contains("periods")) s.periods = parse_periods(j.at("periods"));
  if (s.periods.empty()) throw Error(ErrorKind::Config, "study: 'periods' is required");
  s.baseline = parse_controls(j, "baseline", s.baseline);
  s.final_controls = parse_controls(j, "final_controls", s.final_controls);

  const auto models = j.find("models");
  if (models == j.end() || (models->is_string() && models->get<std::string>() == "standard")) {
    if (metric != s.metric || s.models.empty()) s.models = standard_models(s.dimensions, metric);
  } else if (models->is_array()) {
    s.models.clear();
    for (const auto& m : *models) s.models.push_back(parse_model(m, metric, s.models.size() + 1));
    if (s.models.empty() || !s.models.front().terms.empty())
      s.models.insert(s.models.begin(), ModelSpec{"baseline", {}, {}});
  } else {
    throw Error(ErrorKind::Config, "study: 'models' must be \"standard\" or an array");
  }
  s.metric = metric;

  if (j.contains("robustness")) {
    s.robustness.clear();
    for (const auto& r : j.at("robustness")) {
      check_keys(r, {"label", "controls", "extra_metric", "replace_metric"}, "robustness");
      RobustnessCheck c;
      c.label = get_or<std::string>(r, "label", "");
      c.controls = parse_controls(r, "controls", {});
      c.extra_metric = get_or<std::string>(r, "extra_metric", "");
      c.replace_metric = get_or<std::string>(r, "replace_metric", "");
      if (c.label.empty()) throw Error(ErrorKind::Config, "robustness: 'label' is required");
      s.robustness.push_back(std::move(c));
    }
  }
  std::set<std::string> ids;
  for (const auto& m : s.models)
    if (!ids.insert(m.id).second) throw Error(ErrorKind::Config, "study: duplicate model id '" + m.id + "'");
  check_dimensions(s);
  return s;
}

namespace {

std::vector<std::string> complexity_names(const PanelDataset& panel) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < panel.names.size(); ++i)
    if (panel.roles[i] == RegressorRole::Complexity) out.push_back(panel.names[i]);
  return out;
}

ModelSpec union_model(const StudySpec& study) {
  ModelSpec u;
  u.id = "common";
  std::vector<Factor> seen;
  for (const auto& m : study.models) {
    for (const auto& t : m.terms)
      for (const auto& f : t.factors)
        if (std::find(seen.begin(), seen.end(), f) == seen.end()) {
          seen.push_back(f);
          u.terms.push_back(TermSpec{{f}, true});
        }
    for (const auto& c : m.controls) u.controls.push_back(c);
  }
  return u;
}

ModelSpec augmented(const ModelSpec& model, const RobustnessCheck& check) {
  ModelSpec m = model;
  m.id = model.id;
  for (const auto& c : check.controls) m.controls.push_back(c);
  if (!check.replace_metric.empty())
    for (auto& t : m.terms)
      if (t.complexity)
        for (auto& f : t.factors) f.metric = check.replace_metric;
  if (!check.extra_metric.empty()) {
    std::vector<Factor> mains;
    for (const auto& t : model.terms)
      for (const auto& f : t.factors) {
        Factor extra{check.extra_metric, f.dimension};
        if (std::find(mains.begin(), mains.end(), extra) == mains.end()) mains.push_back(extra);
      }
    for (auto& f : mains) m.terms.push_back(TermSpec{{f}, false});
  }
  return m;
}

WaldResult complexity_f(const PanelDataset& panel) {
  const auto full = ols(panel);
  const auto restricted = ols(panel.without(complexity_names(panel)));
  return wald_f(full, restricted);
}

}  // namespace

StudyResult run_study(const StudySpec& study, const DataBundle& data, Warnings* warnings) {
  if (study.models.empty() || !study.models.front().terms.empty())
    throw Error(ErrorKind::Specification, fmt::format("study {}: the first model must be the baseline", study.name));
  StudyResult result;
  result.spec = study;
  result.sample = available_sample(study, union_model(study), data);
  if (result.sample.empty())
    throw Error(ErrorKind::Specification, fmt::format("study {}: no complete observations", study.name));

  for (const auto& model : study.models) result.panels.push_back(build_panel(study, model, data, &result.sample, warnings));
  const std::span<const PanelDataset> candidates(result.panels.data() + 1, result.panels.size() - 1);
  result.selection = select_multidimensional_model(candidates, result.panels.front(), study.alpha);

  for (const auto& check : study.robustness) {
    RobustnessRow row{check.label, {}};
    for (std::size_t i = 1; i < study.models.size(); ++i) {
      const ModelSpec model = augmented(study.models[i], check);
      try {
        auto sample = available_sample(study, model, data);
        std::erase_if(sample, [&](const ObsKey& k) { return !result.sample.count(k); });
        row.by_model[model.id] = complexity_f(build_panel(study, model, data, &sample, nullptr));
      } catch (const Error& e) {
        warn(warnings, fmt::format("study {}: robustness '{}' skipped for {}: {}", study.name, check.label,
                                   model.id, e.what()));
      }
    }
    result.robustness.push_back(std::move(row));
  }

  if (result.selection.found()) {
    const ModelSpec& chosen = study.models[*result.selection.chosen + 1];
    ModelSpec final_spec = chosen;
    final_spec.id = chosen.id + " final";
    for (const auto& c : study.final_controls) {
      final_spec.controls.push_back(c);
      try {
        if (available_sample(study, final_spec, data).empty()) throw Error(ErrorKind::Specification, "no observations");
      } catch (const Error& e) {
        warn(warnings, fmt::format("study {}: final control '{}' dropped: {}", study.name, c.display(), e.what()));
        final_spec.controls.pop_back();
      }
    }
    FinalModel final_model;
    final_model.panel = build_panel(study, final_spec, data, nullptr, warnings);
    final_model.fit = ols(final_model.panel);
    final_model.composite = composite_eci(final_model.fit, final_model.panel);
    final_model.composite_panel = final_model.panel.without(complexity_names(final_model.panel))
                                      .with_column("Composite ECI", RegressorRole::Complexity, final_model.composite);
    final_model.composite_panel.spec_id = chosen.id + " composite";
    final_model.composite_fit = ols(final_model.composite_panel);
    final_model.conditional = conditional_correlation(final_model.composite_panel, "Composite ECI");
    result.final_model = std::move(final_model);
  }
  return result;
}

}  // namespace mdc
