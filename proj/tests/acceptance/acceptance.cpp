// One PASS/FAIL/SKIPPED line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "mdc/config.hpp"
#include "mdc/csv.hpp"
#include "mdc/depvar.hpp"
#include "mdc/diagnostics.hpp"
#include "mdc/error.hpp"
#include "mdc/instrument.hpp"
#include "mdc/metrics.hpp"
#include "mdc/pipeline.hpp"
#include "mdc/regression.hpp"
#include "mdc/specialization.hpp"
#include "mdc/study.hpp"
#include "mdc/synthetic.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace mdc;

namespace {

enum class Outcome { Pass, Fail, Skipped };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<double> table_r2(const fs::path& csv_path, const std::string& model) {
  std::ifstream in(csv_path);
  if (!in) return std::nullopt;
  csv::Reader reader(in);
  const auto m = reader.require("model"), stat = reader.require("statistic"), value = reader.require("value");
  std::vector<std::string> row;
  while (reader.next(row))
    if (row[m] == model && row[stat] == "r2") return csv::parse_double(row[value]);
  return std::nullopt;
}

Verdict reference_reproduction() {
  const char* path = std::getenv("MDC_REFERENCE_CONFIG");
  if (!path || !*path) return {Outcome::Skipped, "set MDC_REFERENCE_CONFIG to a config over the 2014 reference extracts"};
  auto config = load_run_config(path);
  config.cross_dimension_year = 2014;
  const auto report = run_pipeline(config);
  struct Target {
    const char* a;
    const char* b;
    double r2;
  };
  const Target targets[] = {{"trade", "technology", 0.51}, {"trade", "research", 0.44}, {"research", "technology", 0.54}};
  bool ok = true;
  std::string detail;
  for (const auto& t : targets) {
    std::optional<double> got;
    for (const auto& f : report.cross_dimension)
      if (f.year == 2014 && ((f.x == t.a && f.y == t.b) || (f.x == t.b && f.y == t.a))) got = f.r2;
    ok = ok && got && std::abs(*got - t.r2) <= 0.05;
    detail += fmt::format("{}~{} R2 {} (target {:.2f}); ", t.a, t.b, got ? fmt::format("{:.3f}", *got) : "missing", t.r2);
  }
  const auto r2 = table_r2(config.output_dir / "regress" / "growth" / "table.csv", "(9)");
  ok = ok && r2 && std::abs(*r2 - 0.427) <= 0.02;
  detail += fmt::format("growth (9) R2 {} (target 0.427)", r2 ? fmt::format("{:.3f}", *r2) : "missing");
  return verdict(ok, detail);
}

Verdict eigen_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240501);
  double worst = 0.0;
  int compared = 0, degenerate = 0, mismatched = 0;
  for (int s = 0; s < 100; ++s) {
    const auto raw = oracle::random_pruned_binary(rng, 5, 8, 0.5);
    const auto spec = make_specialization(oracle::to_eigen(raw));
    const bool oracle_degenerate = oracle::spectral_gap(raw) < 1e-10;
    try {
      const auto r = eci(spec);
      if (oracle_degenerate) {
        ++mismatched;
        continue;
      }
      const auto expected = oracle::eci(raw);
      double same = 0.0, flipped = 0.0;
      for (std::size_t i = 0; i < expected.size(); ++i) {
        same = std::max(same, std::abs(r.eci.scores[i] - expected[i]));
        flipped = std::max(flipped, std::abs(r.eci.scores[i] + expected[i]));
      }
      worst = std::max(worst, std::min(same, flipped));
      ++compared;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Degenerate && oracle_degenerate)
        ++degenerate;
      else
        ++mismatched;
    }
  }
  const double elapsed = seconds_since(t0);
  return verdict(worst <= 1e-8 && mismatched == 0 && elapsed < 5.0,
                 fmt::format("{} compared, max |diff| {:.2e}; {} degenerate spectra rejected by both; {} mismatches; {:.3f} s",
                             compared, worst, degenerate, mismatched, elapsed));
}

// Largest violation of F = norm(M Q), Q = norm(1 / (M^T (1/F))) at a returned pair.
double fixed_point_residual(const SpecializationMatrix& spec, const FitnessResult& r) {
  const Eigen::Map<const Eigen::VectorXd> f(r.fitness.scores.data(), static_cast<Eigen::Index>(r.fitness.size()));
  const Eigen::Map<const Eigen::VectorXd> q(r.complexity.scores.data(), static_cast<Eigen::Index>(r.complexity.size()));
  Eigen::VectorXd f_next = spec.entries * q;
  f_next /= f_next.mean();
  Eigen::VectorXd q_next = (spec.entries.transpose() * f.cwiseInverse()).cwiseInverse();
  q_next /= q_next.mean();
  return std::max((f_next - f).cwiseAbs().maxCoeff(), (q_next - q).cwiseAbs().maxCoeff());
}

Verdict fitness_fixed_points() {
  std::string detail;
  bool ok = true;

  const auto ones = make_specialization(Eigen::MatrixXd::Ones(5, 7));
  const auto r1 = fitness(ones);
  double dev = 0.0;
  for (double v : r1.fitness.scores) dev = std::max(dev, std::abs(v - 1.0));
  for (double v : r1.complexity.scores) dev = std::max(dev, std::abs(v - 1.0));
  ok = ok && dev <= 1e-12;
  detail += fmt::format("all-ones max |F-1|,|Q-1| {:.1e}; ", dev);

  Eigen::MatrixXd nested(4, 4);
  nested << 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0, 1, 0, 0, 0;
  const auto nspec = make_specialization(nested);
  Warnings quiet;
  try {
    const auto r = fitness(nspec, {}, &quiet);
    const double res = fixed_point_residual(nspec, r);
    ok = ok && res < 1e-10;
    detail += fmt::format("nested: converged in {} iterations, fixed-point residual {:.1e}; ", r.iterations, res);
  } catch (const Error& e) {
    ok = false;
    detail += fmt::format("nested: {}", e.what());
    FitnessOptions extended;
    extended.max_iter = 200000;
    const auto r = fitness(nspec, extended, &quiet);
    detail += fmt::format(" (with {} allowed: converged in {}, fixed-point residual {:.2e}); ", extended.max_iter,
                          r.iterations, fixed_point_residual(nspec, r));
  }

  std::mt19937_64 rng(7);
  int converged = 0, max_iter_seen = 0;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const auto spec = make_specialization(oracle::to_eigen(oracle::random_pruned_binary(rng, 5, 8, 0.5)));
    try {
      const auto r = fitness(spec, {}, &quiet);
      worst = std::max(worst, fixed_point_residual(spec, r));
      max_iter_seen = std::max(max_iter_seen, r.iterations);
      ++converged;
    } catch (const Error&) {
    }
  }
  ok = ok && converged == 100 && worst < 1e-10;
  detail += fmt::format("random 5x8: {}/100 converged within 1000 iterations (max {} used), worst fixed-point residual {:.2e}",
                        converged, max_iter_seen, worst);
  return verdict(ok, detail);
}

PanelDataset two_period_panel(std::mt19937_64& rng, const Eigen::VectorXd& beta) {
  const Eigen::Index n = 50, k = beta.size() - 2;
  Eigen::MatrixXd x(n, k + 1);
  x.leftCols(k) = fixtures::normal_matrix(rng, n, k);
  for (Eigen::Index i = 0; i < n; ++i) x(i, k) = i >= n / 2 ? 1.0 : 0.0;
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, beta[0]) + x * beta.tail(k + 1) +
                      0.7 * fixtures::normal_matrix(rng, n, 1).col(0);
  std::vector<std::string> names;
  std::vector<RegressorRole> roles;
  for (Eigen::Index j = 0; j < k; ++j) {
    names.push_back("x" + std::to_string(j + 1));
    roles.push_back(j == 0 ? RegressorRole::Control : RegressorRole::Complexity);
  }
  names.push_back("Period 2");
  roles.push_back(RegressorRole::PeriodEffect);
  return fixtures::panel(x, y, names, roles);
}

Verdict ols_oracle() {
  std::mt19937_64 rng(99);
  Eigen::VectorXd beta(5);
  beta << 1.5, -2.0, 0.8, 1.2, 0.6;
  double worst = 0.0, worst_fw = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  for (int s = 0; s < 100; ++s) {
    const auto p = two_period_panel(rng, beta);
    const auto fit = ols(p);
    const auto o = oracle::ols(p.X, p.y);
    for (Eigen::Index j = 0; j < p.n_params(); ++j) {
      const auto u = static_cast<std::size_t>(j);
      worst = std::max({worst, rel(fit.coef[j], o.coef[u]), rel(fit.se[j], o.se[u])});
    }
    worst = std::max({worst, rel(fit.r2, o.r2), rel(fit.adj_r2, o.adj_r2)});
    for (const char* target : {"x2", "x3"}) {
      const auto c = conditional_correlation(p, target);
      worst_fw = std::max(worst_fw, std::abs(c.slope - fit.coefficient(target)));
    }
  }
  return verdict(worst <= 1e-8 && worst_fw <= 1e-9,
                 fmt::format("100 panels: max relative diff {:.2e}; Frisch-Waugh max |slope - coef| {:.2e}", worst, worst_fw));
}

Verdict wald_calibration() {
  std::mt19937_64 rng(5150);
  int rejections = 0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const Eigen::MatrixXd x = fixtures::normal_matrix(rng, 150, 2);
    const Eigen::VectorXd y = 1.0 + 0.5 * x.col(0).array() + fixtures::normal_matrix(rng, 150, 1).col(0).array();
    const auto p = fixtures::panel(x, y, {"control", "noise"}, {RegressorRole::Control, RegressorRole::Complexity});
    const auto w = wald_f(ols(p), ols(p.without({"noise"})));
    rejections += w.p_value < 0.05;
  }
  const double rate = static_cast<double>(rejections) / seeds;
  return verdict(rate >= 0.03 && rate <= 0.07, fmt::format("rejection rate {:.3f} over {} null seeds", rate, seeds));
}

Verdict planted_selection() {
  const auto study = fixtures::two_period_growth({"trade", "technology", "research"});
  const std::string planted = "(9)";
  int recovered = 0;
  double r2_base = 0.0, r2_chosen = 0.0;
  for (int s = 0; s < 100; ++s) {
    const auto result = run_study(study, fixtures::planted_growth(1000 + static_cast<std::uint64_t>(s)));
    r2_base += result.selection.baseline.r2;
    if (result.selection.found()) {
      r2_chosen += result.selection.chosen_fit().r2;
      recovered += result.selection.chosen_id() == planted;
    }
  }
  return verdict(recovered >= 95, fmt::format("planted model {} chosen in {}/100 seeds (mean R2 baseline {:.3f}, chosen {:.3f})",
                                              planted, recovered, r2_base / 100, r2_chosen / 100));
}

Verdict depvar_formulas() {
  SeriesTable gdp;
  gdp.set("x", 2000, 1000.0);
  gdp.set("x", 2010, 2000.0);
  const double g = growth_depvar(gdp, 2000, 10).at("x");
  SeriesTable ghg, gdp_pc, pop;
  ghg.set("x", 2014, 100.0);
  gdp_pc.set("x", 2014, 1e4);
  pop.set("x", 2014, 1e6);
  const double e = *emission_intensity_depvar(ghg, gdp_pc, pop).get("x", 2014);
  std::istringstream in("economy,activity,year,value\nx,a,2014,2\nx,b,2014,2\nx,c,2014,2\nx,d,2014,2\n");
  const double h = entropy(parse_output_csv(in, DimensionId("trade")), 2014).scores.at(0);
  const bool ok = std::abs(g - 6.93147) < 1e-5 && std::abs(g - 10.0 * std::log(2.0)) < 1e-10 &&
                  std::abs(e - -18.4207) < 1e-4 && std::abs(h - std::log(4.0)) < 1e-12;
  return verdict(ok, fmt::format("growth {:.10f}, emission intensity {:.6f}, uniform-4 entropy error {:.1e}", g, e,
                                 std::abs(h - std::log(4.0))));
}

Verdict instrument_oracle() {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> normal;
  int mismatches = 0;
  bool symmetric = true, bounded = true;
  for (int s = 0; s < 100; ++s) {
    const auto raw = oracle::random_pruned_binary(rng, 10, 15, 0.4);
    const auto spec = make_specialization(oracle::to_eigen(raw));
    const auto sim = similarity(spec);
    symmetric = symmetric && sim.phi == sim.phi.transpose();
    bounded = bounded && sim.phi.minCoeff() >= 0.0 && sim.phi.maxCoeff() <= 1.0;
    ComplexityVector scores;
    scores.codes = spec.economies;
    for (std::size_t i = 0; i < spec.economies.size(); ++i) scores.scores.push_back(normal(rng));
    const auto map = instrument_eci(sim, scores, 3);
    for (std::size_t c = 0; c < raw.size(); ++c) {
      std::vector<std::string> expected;
      for (auto o : oracle::top_k(raw, spec.economies, c, 3)) expected.push_back(spec.economies[o]);
      mismatches += map.entries[c].neighbors != expected;
    }
  }
  return verdict(mismatches == 0 && symmetric && bounded,
                 fmt::format("{} neighbour-set mismatches over 1000 economies; phi symmetric: {}, in [0,1]: {}", mismatches,
                             symmetric, bounded));
}

Verdict determinism_and_scale() {
  const fs::path dir = fs::temp_directory_path() / "mdc_acceptance_fixture";
  fs::remove_all(dir);
  SyntheticOptions options;
  const auto t0 = std::chrono::steady_clock::now();
  auto config = load_run_config(write_synthetic_fixture(dir, options));
  const fs::path first_dir = dir / "run1", second_dir = dir / "run2";
  config.output_dir = first_dir;
  const auto first = run_pipeline(config);
  const double first_time = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  config.output_dir = second_dir;
  const auto second = run_pipeline(config);
  const double second_time = seconds_since(t1);
  int differing = 0;
  for (const auto& f : first.files) differing += slurp(first_dir / f) != slurp(second_dir / f);
  const bool ok = first.files == second.files && differing == 0 && first_time < 30.0 && second_time < 30.0;
  return verdict(ok, fmt::format("{} economies x {} activities x {} dimensions: {:.1f} s and {:.1f} s, {} files, {} differ",
                                 options.economies, options.activities, options.dimensions.size(), first_time,
                                 second_time, first.files.size(), differing));
}

}  // namespace

int main() {
  set_log_level_quiet(true);
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"reference reproduction", reference_reproduction},
      {"eigen oracle equivalence", eigen_oracle},
      {"fitness fixed points", fitness_fixed_points},
      {"OLS oracle", ols_oracle},
      {"Wald calibration", wald_calibration},
      {"planted model selection", planted_selection},
      {"dependent-variable formulas", depvar_formulas},
      {"instrument correctness", instrument_oracle},
      {"determinism and scale", determinism_and_scale},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("error: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIPPED";
    failures += v.outcome == Outcome::Fail;
    fmt::print("{:<7} [{}] {}: {}\n", tag, index++, name, v.detail);
  }
  return failures == 0 ? 0 : 1;
}
