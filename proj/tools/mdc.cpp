// mdc: command line front end for the multidimensional complexity pipeline.

#include <cstdint>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mdc/mdc.hpp"

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

mdc::RunConfig load(const Globals& g) {
  if (g.config.empty()) throw mdc::Error(mdc::ErrorKind::Config, "--config is required");
  auto config = mdc::load_run_config(g.config);
  if (!g.out.empty()) config.output_dir = g.out;
  if (g.seed) config.seed = *g.seed;
  return config;
}

int run_stages(const Globals& g, std::set<mdc::Stage> stages) {
  auto config = load(g);
  if (!stages.empty()) config.stages = std::move(stages);
  const auto report = mdc::run_pipeline(config);
  for (const auto& [study, model] : report.selected_models)
    fmt::print("{}: selected {}\n", study, model);
  for (const auto& f : report.cross_dimension)
    fmt::print("{} ~ {} ({}): R2 = {:.3f}, n = {}\n", f.y, f.x, f.year, f.r2, f.n);
  fmt::print("{} files written to {} ({} warnings)\n", report.files.size(), config.output_dir.string(),
             report.warnings.size());
  return 0;
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdc::Error(mdc::ErrorKind::Io, "cannot write '" + path + "'");
  write(out);
}

struct Selection {
  std::string dimension;
  int year = 0;
};

const mdc::OutputPanel& pick(const std::vector<mdc::OutputPanel>& panels, const std::string& name) {
  for (const auto& p : panels)
    if (p.dimension.name() == name) return p;
  throw mdc::Error(mdc::ErrorKind::Config, "unknown dimension '" + name + "'");
}

std::vector<mdc::OutputPanel> load_panels(const mdc::RunConfig& config, std::optional<mdc::AuxTable>& aux) {
  if (config.aux) aux = mdc::load_aux_csv(*config.aux);
  return mdc::load_dimensions(config, aux ? &*aux : nullptr);
}

int single_metric(const Globals& g, const Selection& sel, const std::string& metric) {
  const auto config = load(g);
  std::optional<mdc::AuxTable> aux;
  const auto panels = load_panels(config, aux);
  const auto& panel = pick(panels, sel.dimension);
  mdc::ComplexityVector v;
  if (metric == "hhi") {
    v = mdc::hhi(panel, sel.year);
  } else if (metric == "entropy") {
    v = mdc::entropy(panel, sel.year);
  } else if (metric == "intensity") {
    if (!aux) throw mdc::Error(mdc::ErrorKind::Config, "intensity needs an 'aux' table");
    v = mdc::intensity(panel, *aux, sel.year);
  } else {
    const auto spec = mdc::binarize(mdc::compute_rca(panel, sel.year), config.rca_threshold);
    if (metric == "eci" || metric == "pci") {
      const auto r = mdc::eci(spec);
      v = metric == "eci" ? r.eci : r.pci;
    } else if (metric == "fitness" || metric == "complexity") {
      const auto r = mdc::fitness(spec, config.fitness);
      v = metric == "fitness" ? r.fitness : r.complexity;
    } else {
      throw mdc::Error(mdc::ErrorKind::Config, "unknown metric '" + metric + "'");
    }
  }
  emit(g.out, [&](std::ostream& out) { mdc::write_scores_csv(out, v); });
  return 0;
}

int single_instrument(const Globals& g, const Selection& sel, int k) {
  const auto config = load(g);
  std::optional<mdc::AuxTable> aux;
  const auto panels = load_panels(config, aux);
  const auto spec = mdc::binarize(mdc::compute_rca(pick(panels, sel.dimension), sel.year), config.rca_threshold);
  const auto map = mdc::instrument_eci(mdc::similarity(spec), mdc::eci(spec).eci, k);
  emit(g.out, [&](std::ostream& out) { mdc::write_instrument_csv(out, map); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multidimensional economic complexity: specialization, complexity metrics, and panel regressions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--out", g.out, "Output directory (or file for single-table commands)");
  app.add_option("--seed", g.seed, "Seed overriding the configuration");
  app.add_flag("-q,--quiet", g.quiet, "Only log errors");

  auto* run = app.add_subcommand("run", "Run every configured stage");
  auto* ingest = app.add_subcommand("ingest", "Load and filter the dimension panels");
  auto* specialize = app.add_subcommand("specialize", "Compute RCA and specialization matrices");
  auto* regress = app.add_subcommand("regress", "Estimate the configured studies");

  Selection sel;
  std::string metric = "eci";
  auto* metrics = app.add_subcommand("metrics", "Compute complexity metrics");
  metrics->add_option("--dimension", sel.dimension, "Single dimension (writes code,score)");
  metrics->add_option("--year", sel.year, "Year for --dimension");
  metrics->add_option("--metric", metric, "eci|pci|fitness|complexity|hhi|entropy|intensity");

  int k = 3;
  auto* instrument = app.add_subcommand("instrument", "Build similarity-based instruments");
  instrument->add_option("--dimension", sel.dimension, "Single dimension (writes one table)");
  instrument->add_option("--year", sel.year, "Year for --dimension");
  instrument->add_option("--k", k, "Neighbors per economy")->check(CLI::PositiveNumber);

  mdc::SyntheticOptions fixture_options;
  bool no_filters = false;
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic input fixture and its config");
  fixture->add_option("--economies", fixture_options.economies);
  fixture->add_option("--activities", fixture_options.activities);
  fixture->add_option("--dimensions", fixture_options.dimensions);
  fixture->add_flag("--no-filters", no_filters, "Disable eligibility filters in the emitted config");

  for (auto* sub : {run, ingest, specialize, regress, metrics, instrument, fixture}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : mdc::exit_code(mdc::ErrorKind::Config);
  }
  mdc::set_log_level_quiet(g.quiet);

  try {
    using mdc::Stage;
    if (*run) return run_stages(g, {});
    if (*ingest) return run_stages(g, {Stage::Ingest});
    if (*specialize) return run_stages(g, {Stage::Specialize});
    if (*regress) return run_stages(g, {Stage::Regress});
    if (*metrics) {
      if (!sel.dimension.empty()) return single_metric(g, sel, metric);
      return run_stages(g, {Stage::Metrics});
    }
    if (*instrument) {
      if (!sel.dimension.empty()) return single_instrument(g, sel, k);
      return run_stages(g, {Stage::Instrument});
    }
    if (*fixture) {
      if (g.out.empty()) throw mdc::Error(mdc::ErrorKind::Config, "--out is required");
      if (g.seed) fixture_options.seed = *g.seed;
      fixture_options.filters = !no_filters;
      fmt::print("{}\n", mdc::write_synthetic_fixture(g.out, fixture_options).string());
      return 0;
    }
  } catch (const mdc::Error& e) {
    mdc::log_error(fmt::format("{} error: {}", mdc::to_string(e.kind()), e.what()));
    return mdc::exit_code(e.kind());
  } catch (const std::exception& e) {
    mdc::log_error(e.what());
    return 1;
  }
  return 0;
}
