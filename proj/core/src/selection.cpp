#include "mdc/selection.hpp"

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

const RegressionFit& SelectionResult::chosen_fit() const { return chosen ? fits[*chosen] : baseline; }

std::string SelectionResult::chosen_id() const { return chosen_fit().spec_id; }

SelectionResult select_multidimensional_model(std::span<const PanelDataset> candidates,
                                              const PanelDataset& baseline, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Config, "alpha must lie in (0, 1)");
  SelectionResult result;
  result.alpha = alpha;
  result.baseline = ols(baseline);
  for (const auto& panel : candidates) {
    RegressionFit fit = ols(panel);
    CandidateReport report;
    report.id = fit.spec_id;
    report.r2 = fit.r2;
    report.adj_r2 = fit.adj_r2;
    report.n_obs = fit.n_obs;
    report.vs_baseline = wald_f(fit, result.baseline);
    report.jointly_significant = report.vs_baseline.df_num > 0 && report.vs_baseline.p_value < alpha;
    bool any = false;
    bool all = true;
    for (Eigen::Index i = 0; i < fit.n_params; ++i) {
      if (fit.roles[static_cast<std::size_t>(i)] != RegressorRole::Complexity) continue;
      const double p = fit.p_value(i);
      report.term_p_values.emplace_back(fit.names[static_cast<std::size_t>(i)], p);
      any = true;
      all = all && p < alpha;
    }
    report.all_terms_significant = any && all;
    report.passes = report.jointly_significant && report.all_terms_significant;
    if (report.passes && (!result.chosen || fit.r2 > result.fits[*result.chosen].r2))
      result.chosen = result.fits.size();
    result.fits.push_back(std::move(fit));
    result.reports.push_back(std::move(report));
  }
  return result;
}

namespace {

std::vector<std::string> split_interaction(const std::string& name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (auto pos = name.find(" x "); pos != std::string::npos; pos = name.find(" x ", start)) {
    parts.push_back(name.substr(start, pos - start));
    start = pos + 3;
  }
  parts.push_back(name.substr(start));
  return parts;
}

std::string interaction_note(const RegressionFit& fit, Eigen::Index i, double alpha) {
  const double b = fit.coef[i];
  if (!(fit.p_value(i) < alpha)) return "no relationship (interaction not significant)";
  bool same_sign = true;
  for (const auto& main : split_interaction(fit.names[static_cast<std::size_t>(i)])) {
    auto j = fit.index(main);
    if (!j || (fit.coef[*j] > 0.0) != (b > 0.0)) same_sign = false;
  }
  if (same_sign) return "complements";
  if (b < 0.0) return "substitutes";
  return "mixed (depends on the remaining dimensions)";
}

}  // namespace

std::string format_selection_report(const SelectionResult& result) {
  std::string out = fmt::format("Model selection (alpha = {:g}); baseline {} R2 = {:.3f}, n = {}\n",
                                result.alpha, result.baseline.spec_id, result.baseline.r2,
                                result.baseline.n_obs);
  out += fmt::format("{:<8} {:>7} {:>7} {:>10} {:>9} {:>6} {:>6} {:>5}\n", "model", "R2", "adj R2",
                     "F", "p(F)", "joint", "terms", "pass");
  for (const auto& r : result.reports) {
    out += fmt::format("{:<8} {:>7.3f} {:>7.3f} {:>10.3f} {:>9.4f} {:>6} {:>6} {:>5}\n", r.id, r.r2,
                       r.adj_r2, r.vs_baseline.f, r.vs_baseline.p_value,
                       r.jointly_significant ? "yes" : "no", r.all_terms_significant ? "yes" : "no",
                       r.passes ? "yes" : "no");
  }
  if (!result.found()) {
    out += fmt::format("No multidimensional model passes; baseline {} retained.\n", result.baseline.spec_id);
    return out;
  }
  const auto& fit = result.chosen_fit();
  out += fmt::format("Chosen: {} (R2 = {:.3f})\n", fit.spec_id, fit.r2);
  for (Eigen::Index i = 0; i < fit.n_params; ++i) {
    const auto& name = fit.names[static_cast<std::size_t>(i)];
    if (fit.roles[static_cast<std::size_t>(i)] != RegressorRole::Complexity || name.find(" x ") == std::string::npos)
      continue;
    out += fmt::format("  {}: b = {:.3f}, {}\n", name, fit.coef[i], interaction_note(fit, i, result.alpha));
  }
  return out;
}

void write_selection_csv(std::ostream& out, const SelectionResult& result) {
  out << "model,r2,adj_r2,n_obs,f,df_num,df_den,p_value,jointly_significant,all_terms_significant,passes,chosen\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    csv::write_row(out, {r.id, csv::format_double(r.r2), csv::format_double(r.adj_r2),
                         std::to_string(r.n_obs), csv::format_double(r.vs_baseline.f),
                         std::to_string(r.vs_baseline.df_num), std::to_string(r.vs_baseline.df_den),
                         csv::format_double(r.vs_baseline.p_value),
                         r.jointly_significant ? "1" : "0", r.all_terms_significant ? "1" : "0",
                         r.passes ? "1" : "0", result.chosen == i ? "1" : "0"});
  }
}

}  // namespace mdc
