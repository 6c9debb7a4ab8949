#include "mdc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"
#include "mdc/report.hpp"
#include "mdc/specialization.hpp"
#include "mdc/stats.hpp"

#ifndef MDC_VERSION
#define MDC_VERSION "unknown"
#endif

namespace mdc {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Numerical, "SHA-256 initialisation failed");
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0)
    EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<CrossDimensionFit> cross_dimension_fits(const std::vector<ComplexityVector>& ecis) {
  std::vector<CrossDimensionFit> out;
  for (std::size_t a = 0; a < ecis.size(); ++a) {
    for (std::size_t b = a + 1; b < ecis.size(); ++b) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < ecis[a].size(); ++i)
        if (auto v = ecis[b].score(ecis[a].codes[i])) {
          x.push_back(ecis[a].scores[i]);
          y.push_back(*v);
        }
      CrossDimensionFit fit;
      fit.x = ecis[a].dimension.name();
      fit.y = ecis[b].dimension.name();
      fit.year = ecis[a].period;
      fit.n = static_cast<Eigen::Index>(x.size());
      if (x.size() < 3) throw Error(ErrorKind::Degenerate, fmt::format("{} ~ {}: fewer than 3 common economies", fit.y, fit.x));
      const double mx = stats::mean(x), my = stats::mean(y);
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
      }
      fit.slope = sxy / sxx;
      fit.intercept = my - fit.slope * mx;
      const double r = stats::pearson(x, y);
      fit.r2 = r * r;
      const double df = static_cast<double>(x.size()) - 2.0;
      fit.p_value = fit.r2 >= 1.0 ? 0.0 : stats::t_two_sided_p(r * std::sqrt(df / (1.0 - fit.r2)), df);
      out.push_back(fit);
    }
  }
  return out;
}

std::vector<OutputPanel> load_dimensions(const RunConfig& config, const AuxTable* aux, Warnings* warnings) {
  std::vector<OutputPanel> panels;
  for (const auto& d : config.dimensions) {
    auto panel = load_output_csv(d.path, d.id, warnings);
    panel.kind = d.kind;
    panels.push_back(std::move(panel));
  }
  if (!config.apply_filters) return panels;
  if (!aux) throw Error(ErrorKind::Config, "eligibility filters need an auxiliary table");
  AuxTable totals = *aux;
  for (const auto& p : panels) totals = with_dimension_totals(std::move(totals), p);
  for (auto& p : panels) p = apply_eligibility(p, totals, config.eligibility, warnings);
  return panels;
}

namespace {

class Writer {
 public:
  explicit Writer(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& relative, const std::string& contents) {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << contents)) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    files_.push_back(relative);
  }

  template <typename Fn>
  void stream(const fs::path& relative, Fn&& fn) {
    std::ostringstream out;
    fn(out);
    write(relative, out.str());
  }

  void record(const fs::path& relative) { files_.push_back(relative); }
  const fs::path& root() const { return root_; }
  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

template <typename Fn>
auto in_stage(Stage stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("stage {}: {}", to_string(stage), e.what()));
  }
}

bool wants_metric(const RunConfig& c, std::string_view m) {
  return std::find(c.metrics.begin(), c.metrics.end(), m) != c.metrics.end();
}

std::vector<Year> metric_years(const RunConfig& config, const std::vector<OutputPanel>& panels) {
  std::set<Year> years(config.years.begin(), config.years.end());
  for (const auto& s : config.studies)
    for (const auto& p : s.periods) years.insert(p.start);
  if (config.cross_dimension_year) years.insert(*config.cross_dimension_year);
  if (years.empty())
    for (const auto& p : panels)
      for (auto y : p.years()) years.insert(y);
  return {years.begin(), years.end()};
}

void add_scores(DataBundle& data, const std::string& key, const ComplexityVector& v) {
  auto& table = data.scores[key];
  for (std::size_t i = 0; i < v.size(); ++i) table.set(v.codes[i], v.period, v.scores[i]);
}

void write_score_rows(std::ostream& out, std::string_view metric, const ComplexityVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    csv::write_row(out, {std::string(metric), v.dimension.name(), std::to_string(v.period), v.codes[i],
                         csv::format_double(v.scores[i])});
}

std::string safe_name(std::string s) {
  for (auto& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) ch = '_';
  return s;
}

}  // namespace

RunReport run_pipeline(const RunConfig& config) {
  validate(config);
  RunReport report;
  Warnings& warnings = report.warnings;
  Writer writer(config.output_dir);
  nlohmann::json inputs = nlohmann::json::object();

  const bool need_spec = config.wants(Stage::Specialize) || config.wants(Stage::Metrics) ||
                         config.wants(Stage::Instrument) || config.wants(Stage::Regress);
  const bool need_metrics = config.wants(Stage::Metrics) || config.wants(Stage::Instrument) ||
                            config.wants(Stage::Regress);
  const bool need_instrument = config.wants(Stage::Instrument) || config.wants(Stage::Regress);

  // Ingest.
  std::optional<AuxTable> aux;
  std::vector<OutputPanel> panels = in_stage(Stage::Ingest, [&] {
    for (const auto& d : config.dimensions) inputs["dimension:" + d.id.name()] = sha256_file(d.path);
    if (config.aux) {
      aux = load_aux_csv(*config.aux);
      inputs["aux"] = sha256_file(*config.aux);
    }
    for (const auto& [name, path] : config.series) inputs["series:" + name] = sha256_file(path);
    auto loaded = load_dimensions(config, aux ? &*aux : nullptr, &warnings);
    if (config.wants(Stage::Ingest)) {
      writer.stream("ingest/summary.csv", [&](std::ostream& out) {
        out << "dimension,year,economies,activities,records\n";
        for (const auto& p : loaded) {
          for (auto year : p.years()) {
            std::set<std::string> econ, act;
            std::size_t n = 0;
            for (const auto& r : p.records)
              if (r.year == year) {
                econ.insert(r.economy);
                act.insert(r.activity);
                ++n;
              }
            csv::write_row(out, {p.dimension.name(), std::to_string(year), std::to_string(econ.size()),
                                 std::to_string(act.size()), std::to_string(n)});
          }
        }
      });
      if (config.write_clean_panels)
        for (const auto& p : loaded)
          writer.stream("ingest/" + safe_name(p.dimension.name()) + ".csv",
                        [&](std::ostream& out) { write_output_csv(out, p); });
    }
    return loaded;
  });
  report.stages.emplace_back("ingest");

  const std::vector<Year> years = metric_years(config, panels);

  // Specialize.
  std::map<std::pair<std::string, Year>, SpecializationMatrix> specs;
  if (need_spec) {
    in_stage(Stage::Specialize, [&] {
      for (const auto& p : panels) {
        const auto available = p.years();
        for (auto year : years) {
          if (!std::binary_search(available.begin(), available.end(), year)) {
            warn(&warnings, fmt::format("{}: no data for {}", p.dimension.name(), year));
            continue;
          }
          specs.emplace(std::pair{p.dimension.name(), year}, binarize(compute_rca(p, year), config.rca_threshold));
        }
      }
      if (config.wants(Stage::Specialize)) {
        writer.stream("specialize/summary.csv", [&](std::ostream& out) {
          out << "dimension,year,economies,activities,specializations,density\n";
          for (const auto& [key, m] : specs) {
            const double ones = m.entries.sum();
            csv::write_row(out, {key.first, std::to_string(key.second), std::to_string(m.n_economies()),
                                 std::to_string(m.n_activities()), fmt::format("{:.0f}", ones),
                                 csv::format_double(ones / static_cast<double>(m.entries.size()))});
          }
        });
        if (config.write_matrices)
          for (const auto& [key, m] : specs)
            writer.stream(fmt::format("specialize/{}_{}.csv", safe_name(key.first), key.second),
                          [&](std::ostream& out) { write_specialization_csv(out, m); });
      }
      return 0;
    });
    report.stages.emplace_back("specialize");
  }

  // Metrics.
  DataBundle data;
  std::map<std::pair<std::string, Year>, ComplexityVector> eci_by_key;
  if (need_metrics) {
    in_stage(Stage::Metrics, [&] {
      std::ostringstream scores;
      std::ostringstream diagnostics;
      scores << "metric,dimension,year,code,score\n";
      diagnostics << "dimension,year,economies,activities,eigenvalue,spectral_gap,residual,fitness_iterations,fitness_residual\n";
      for (const auto& [key, m] : specs) {
        const auto& [dim, year] = key;
        std::vector<std::string> diag{dim, std::to_string(year), std::to_string(m.n_economies()),
                                      std::to_string(m.n_activities()), "", "", "", "", ""};
        if (wants_metric(config, "eci")) {
          const auto r = eci(m);
          write_score_rows(scores, "eci", r.eci);
          write_score_rows(scores, "pci", r.pci);
          add_scores(data, "eci:" + dim, r.eci);
          eci_by_key.emplace(key, r.eci);
          diag[4] = csv::format_double(r.eigenvalue);
          diag[5] = csv::format_double(r.spectral_gap);
          diag[6] = csv::format_double(r.residual);
        }
        if (wants_metric(config, "fitness")) {
          try {
            const auto r = fitness(m, config.fitness, &warnings);
            write_score_rows(scores, "fitness", r.fitness);
            write_score_rows(scores, "complexity", r.complexity);
            add_scores(data, "fitness:" + dim, r.fitness);
            add_scores(data, "log_fitness:" + dim, r.log_fitness);
            diag[7] = std::to_string(r.iterations);
            diag[8] = csv::format_double(r.residual);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::Convergence) throw;
            warn(&warnings, fmt::format("{} {}: {}; fitness skipped", dim, year, e.what()));
          }
        }
        csv::write_row(diagnostics, diag);
      }
      for (const auto& p : panels) {
        const auto available = p.years();
        for (auto year : years) {
          if (!std::binary_search(available.begin(), available.end(), year)) continue;
          const auto& dim = p.dimension.name();
          if (wants_metric(config, "hhi")) {
            const auto v = hhi(p, year, &warnings);
            write_score_rows(scores, "hhi", v);
            add_scores(data, "hhi:" + dim, v);
          }
          if (wants_metric(config, "entropy")) {
            const auto v = entropy(p, year, &warnings);
            write_score_rows(scores, "entropy", v);
            add_scores(data, "entropy:" + dim, v);
          }
          if (wants_metric(config, "intensity") && aux) {
            const auto v = intensity(p, *aux, year, &warnings);
            write_score_rows(scores, "intensity", v);
            add_scores(data, "intensity:" + dim, v);
          }
        }
      }

      if (wants_metric(config, "eci") && config.dimensions.size() >= 2) {
        Year year = 0;
        if (config.cross_dimension_year) {
          year = *config.cross_dimension_year;
        } else {
          for (auto y : years) {
            bool all = std::all_of(config.dimensions.begin(), config.dimensions.end(),
                                   [&](const auto& d) { return eci_by_key.count({d.id.name(), y}) > 0; });
            if (all) year = y;
          }
        }
        std::vector<ComplexityVector> ecis;
        for (const auto& d : config.dimensions) {
          auto it = eci_by_key.find({d.id.name(), year});
          if (it != eci_by_key.end()) ecis.push_back(it->second);
        }
        if (ecis.size() == config.dimensions.size()) report.cross_dimension = cross_dimension_fits(ecis);
        else
          warn(&warnings, fmt::format("cross-dimension fits skipped: ECI missing for some dimension in {}", year));
      }

      if (config.wants(Stage::Metrics)) {
        writer.write("metrics/scores.csv", scores.str());
        writer.write("metrics/diagnostics.csv", diagnostics.str());
        if (!report.cross_dimension.empty())
          writer.stream("metrics/cross_dimension_r2.csv", [&](std::ostream& out) {
            out << "x,y,year,n,slope,intercept,r2,p_value\n";
            for (const auto& f : report.cross_dimension)
              csv::write_row(out, {f.x, f.y, std::to_string(f.year), std::to_string(f.n),
                                   csv::format_double(f.slope), csv::format_double(f.intercept),
                                   csv::format_double(f.r2), csv::format_double(f.p_value)});
          });
      }
      return 0;
    });
    report.stages.emplace_back("metrics");
  }

  // Instrument.
  if (need_instrument && wants_metric(config, "eci")) {
    in_stage(Stage::Instrument, [&] {
      for (const auto& [key, v] : eci_by_key) {
        const auto map = instrument_eci(similarity(specs.at(key)), v, config.instrument_k, &warnings);
        add_scores(data, "eci_iv:" + key.first, map.as_vector());
        if (config.wants(Stage::Instrument))
          writer.stream(fmt::format("instrument/{}_{}.csv", safe_name(key.first), key.second),
                        [&](std::ostream& out) { write_instrument_csv(out, map); });
      }
      return 0;
    });
    report.stages.emplace_back("instrument");
  }

  // Regress.
  if (config.wants(Stage::Regress) && !config.studies.empty()) {
    in_stage(Stage::Regress, [&] {
      for (const auto& [name, path] : config.series) data.series[name] = load_series_csv(path);
      for (const auto& study : config.studies) {
        const StudyResult result = run_study(study, data, &warnings);
        const fs::path dir = fs::path("regress") / safe_name(study.name);
        fs::create_directories(writer.root() / dir);
        for (const auto& f : emit_table(study_table(result), writer.root() / dir / "table"))
          writer.record(fs::relative(f, writer.root()));
        writer.write(dir / "selection.txt", format_selection_report(result.selection));
        writer.stream(dir / "selection.csv", [&](std::ostream& out) { write_selection_csv(out, result.selection); });
        report.selected_models[study.name] = result.selection.found() ? result.selection.chosen_id() : "baseline";
        if (result.final_model) {
          const auto& fm = *result.final_model;
          RegressionTable table;
          table.title = study.title + ": final model";
          table.depvar_label = study.depvar.label;
          table.columns.push_back({fm.fit.spec_id, fm.fit});
          table.columns.push_back({fm.composite_fit.spec_id, fm.composite_fit});
          for (const auto& f : emit_table(table, writer.root() / dir / "final"))
            writer.record(fs::relative(f, writer.root()));
          writer.stream(dir / "composite.csv", [&](std::ostream& out) {
            out << "economy,period,y,composite\n";
            for (Eigen::Index i = 0; i < fm.panel.n_obs(); ++i)
              csv::write_row(out, {fm.panel.economies[static_cast<std::size_t>(i)],
                                   fm.panel.periods[static_cast<std::size_t>(i)],
                                   csv::format_double(fm.panel.y[i]), csv::format_double(fm.composite[i])});
          });
          writer.stream(dir / "conditional.csv", [&](std::ostream& out) {
            out << "economy,period,y_residual,composite_residual\n";
            const auto& c = fm.conditional;
            for (Eigen::Index i = 0; i < c.y_residuals.size(); ++i)
              csv::write_row(out, {fm.composite_panel.economies[static_cast<std::size_t>(i)],
                                   fm.composite_panel.periods[static_cast<std::size_t>(i)],
                                   csv::format_double(c.y_residuals[i]),
                                   csv::format_double(c.target_residuals[i])});
          });
        }
      }
      return 0;
    });
    report.stages.emplace_back("regress");
  }

  {
    std::string text;
    for (const auto& m : warnings.messages()) text += m + "\n";
    writer.write("warnings.txt", text);
  }

  nlohmann::json manifest;
  manifest["tool"] = "mdc";
  manifest["version"] = MDC_VERSION;
  manifest["config"] = config.source;
  manifest["seed"] = config.seed;
  manifest["stages"] = report.stages;
  manifest["inputs"] = inputs;
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<fs::path> files = writer.files();
  std::sort(files.begin(), files.end());
  for (const auto& f : files) outputs[f.generic_string()] = sha256_file(writer.root() / f);
  manifest["outputs"] = outputs;
  manifest["selected_models"] = report.selected_models;
  writer.write("manifest.json", manifest.dump(2) + "\n");
  report.files = writer.files();
  return report;
}

}  // namespace mdc
