#include "mdc/config.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "mdc/error.hpp"
#include "mdc/study.hpp"

namespace mdc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Specialize: return "specialize";
    case Stage::Metrics: return "metrics";
    case Stage::Instrument: return "instrument";
    case Stage::Regress: return "regress";
  }
  return "unknown";
}

Stage parse_stage(std::string_view text) {
  for (auto s : {Stage::Ingest, Stage::Specialize, Stage::Metrics, Stage::Instrument, Stage::Regress})
    if (to_string(s) == text) return s;
  throw Error(ErrorKind::Config, fmt::format("unknown stage '{}'", text));
}

std::vector<std::string> RunConfig::dimension_names() const {
  std::vector<std::string> out;
  for (const auto& d : dimensions) out.push_back(d.id.name());
  return out;
}

namespace {

constexpr const char* kMetrics[] = {"eci", "fitness", "hhi", "entropy", "intensity"};

template <typename T>
T value(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Config, fmt::format("config: '{}' has the wrong type", key));
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

EligibilityRule parse_eligibility(const json& j) {
  EligibilityRule r;
  const std::pair<const char*, double*> fields[] = {
      {"min_population", &r.min_population},
      {"min_total_exports", &r.min_total_exports},
      {"min_patent_applications", &r.min_patent_applications},
      {"min_publications", &r.min_publications},
      {"min_world_product_exports", &r.min_world_product_exports},
      {"min_patent_class_applications", &r.min_patent_class_applications},
      {"research_doc_floor", &r.research_doc_floor},
      {"research_citation_floor", &r.research_citation_floor},
      {"min_category_publications", &r.min_category_publications},
  };
  if (!j.is_object()) throw Error(ErrorKind::Config, "config: 'eligibility' must be an object");
  for (const auto& [key, v] : j.items()) {
    auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
    if (it == std::end(fields)) throw Error(ErrorKind::Config, "eligibility: unknown key '" + key + "'");
    if (!v.is_number()) throw Error(ErrorKind::Config, "eligibility: '" + key + "' must be a number");
    *it->second = v.get<double>();
  }
  r.validate();
  return r;
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
  static constexpr std::string_view allowed[] = {
      "dimensions", "aux", "series", "apply_filters", "eligibility", "rca_threshold", "metrics",
      "fitness", "instrument_k", "stages", "studies", "years", "cross_dimension_year",
      "write_clean_panels", "write_matrices", "output_dir", "seed"};
  if (!j.is_object()) throw Error(ErrorKind::Config, "config: expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(allowed), std::end(allowed), key) == std::end(allowed))
      throw Error(ErrorKind::Config, "config: unknown key '" + key + "'");

  RunConfig c;
  c.source = j;
  if (!j.contains("dimensions") || !j.at("dimensions").is_array() || j.at("dimensions").empty())
    throw Error(ErrorKind::Config, "config: 'dimensions' must be a non-empty array");
  for (const auto& d : j.at("dimensions")) {
    if (!d.is_object() || !d.contains("name") || !d.contains("path"))
      throw Error(ErrorKind::Config, "config: each dimension needs 'name' and 'path'");
    DimensionInput in;
    in.id = DimensionId(d.at("name").get<std::string>());
    in.kind = d.contains("kind") ? parse_kind(d.at("kind").get<std::string>()) : infer_kind(in.id.name());
    in.path = resolve(base_dir, d.at("path").get<std::string>());
    for (const auto& other : c.dimensions)
      if (other.id == in.id) throw Error(ErrorKind::Config, "config: duplicate dimension '" + in.id.name() + "'");
    c.dimensions.push_back(std::move(in));
  }
  if (j.contains("aux")) c.aux = resolve(base_dir, j.at("aux").get<std::string>());
  if (j.contains("series")) {
    if (!j.at("series").is_object()) throw Error(ErrorKind::Config, "config: 'series' must map names to paths");
    for (const auto& [name, path] : j.at("series").items()) c.series[name] = resolve(base_dir, path.get<std::string>());
  }
  c.apply_filters = value(j, "apply_filters", c.apply_filters);
  if (j.contains("eligibility")) c.eligibility = parse_eligibility(j.at("eligibility"));
  c.rca_threshold = value(j, "rca_threshold", c.rca_threshold);
  c.metrics = value(j, "metrics", c.metrics);
  if (j.contains("fitness")) {
    const auto& f = j.at("fitness");
    c.fitness.tol = value(f, "tol", c.fitness.tol);
    c.fitness.max_iter = value(f, "max_iter", c.fitness.max_iter);
    c.fitness.floor = value(f, "floor", c.fitness.floor);
  }
  c.instrument_k = value(j, "instrument_k", c.instrument_k);
  if (j.contains("stages")) {
    c.stages.clear();
    for (const auto& s : j.at("stages")) c.stages.insert(parse_stage(s.get<std::string>()));
  }
  if (j.contains("studies")) {
    for (const auto& s : j.at("studies")) {
      if (s.is_string())
        c.studies.push_back(parse_study(json{{"preset", s.get<std::string>()}}, c.dimension_names()));
      else
        c.studies.push_back(parse_study(s, c.dimension_names()));
    }
  }
  c.years = value(j, "years", c.years);
  if (j.contains("cross_dimension_year")) c.cross_dimension_year = j.at("cross_dimension_year").get<Year>();
  c.write_clean_panels = value(j, "write_clean_panels", c.write_clean_panels);
  c.write_matrices = value(j, "write_matrices", c.write_matrices);
  if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  c.seed = value(j, "seed", c.seed);
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, fmt::format("config '{}': {}", path.string(), e.what()));
  }
  try {
    return parse_run_config(j, path.parent_path());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, fmt::format("config '{}': {}", path.string(), e.what()));
  }
}

void validate(const RunConfig& config) {
  if (config.dimensions.empty()) throw Error(ErrorKind::Config, "config: no dimensions");
  auto require_file = [](const fs::path& p, std::string_view what) {
    if (!fs::is_regular_file(p)) throw Error(ErrorKind::Io, fmt::format("{} '{}' does not exist", what, p.string()));
  };
  for (const auto& d : config.dimensions) require_file(d.path, "input for dimension " + d.id.name());
  if (config.aux) require_file(*config.aux, "auxiliary table");
  for (const auto& [name, path] : config.series) require_file(path, "series " + name);
  if (config.apply_filters && !config.aux)
    throw Error(ErrorKind::Config, "config: eligibility filters need an 'aux' table (or set apply_filters false)");
  config.eligibility.validate();
  if (!(config.rca_threshold > 0.0)) throw Error(ErrorKind::Config, "config: rca_threshold must be positive");
  if (config.instrument_k < 1) throw Error(ErrorKind::Config, "config: instrument_k must be >= 1");
  if (!(config.fitness.tol > 0.0) || config.fitness.max_iter < 1)
    throw Error(ErrorKind::Config, "config: invalid fitness options");
  for (const auto& m : config.metrics)
    if (std::find(std::begin(kMetrics), std::end(kMetrics), m) == std::end(kMetrics))
      throw Error(ErrorKind::Config, "config: unknown metric '" + m + "'");
  const bool uses_intensity = std::find(config.metrics.begin(), config.metrics.end(), "intensity") != config.metrics.end();
  if (uses_intensity && !config.aux && config.wants(Stage::Metrics))
    throw Error(ErrorKind::Config, "config: the intensity metric needs an 'aux' table");

  const auto dims = config.dimension_names();
  for (const auto& s : config.studies) {
    for (const auto& d : s.dimensions)
      if (std::find(dims.begin(), dims.end(), d) == dims.end())
        throw Error(ErrorKind::Config, fmt::format("study {}: unknown dimension '{}'", s.name, d));
    if (!config.wants(Stage::Regress)) continue;
    std::vector<std::string> needed;
    switch (s.depvar.kind) {
      case DepvarKind::Growth:
      case DepvarKind::PanelAverage: needed.push_back(s.depvar.series); break;
      case DepvarKind::EmissionIntensity:
        needed.insert(needed.end(), {s.depvar.ghg, s.depvar.gdp_pc, s.depvar.population});
        break;
    }
    for (const auto& c : s.baseline) needed.push_back(c.series);
    for (const auto& m : s.models)
      for (const auto& c : m.controls) needed.push_back(c.series);
    for (const auto& name : needed)
      if (!config.series.count(name))
        throw Error(ErrorKind::Config, fmt::format("study {}: series '{}' is not configured", s.name, name));
  }
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir))
    throw Error(ErrorKind::Io, "cannot create output directory '" + config.output_dir.string() + "'");
}

}  // namespace mdc
