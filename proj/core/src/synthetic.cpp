#include "mdc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mdc/error.hpp"

namespace mdc {

namespace fs = std::filesystem;

namespace {

constexpr Year kFirstYear = 1996;
constexpr Year kLastYear = 2019;

struct Economy {
  std::string code;
  double general = 0.0;
  std::vector<double> capability;  // per dimension
  double size = 0.0;
  double log_gdp0 = 0.0;
  double log_pop0 = 0.0;
  double growth = 0.0;  // percent per year
  double human_capital = 0.0;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

fs::path write_synthetic_fixture(const fs::path& dir, const SyntheticOptions& options) {
  if (options.economies < 4 || options.activities < 4 || options.dimensions.empty() || options.years.empty())
    throw Error(ErrorKind::Config, "synthetic fixture needs >= 4 economies, >= 4 activities, dimensions and years");
  fs::create_directories(dir);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n_dims = options.dimensions.size();

  std::vector<Economy> economies(static_cast<std::size_t>(options.economies));
  for (std::size_t i = 0; i < economies.size(); ++i) {
    auto& e = economies[i];
    e.code = fmt::format("E{:03d}", i);
    e.general = normal(rng);
    for (std::size_t d = 0; d < n_dims; ++d) e.capability.push_back(0.7 * e.general + 0.71 * normal(rng));
    e.size = 0.8 * normal(rng);
    e.log_gdp0 = 9.0 + 0.6 * e.general + 0.8 * normal(rng);
    e.log_pop0 = 16.0 + 1.2 * normal(rng);
    e.human_capital = 2.5 + 0.3 * e.general + 0.2 * normal(rng);
    const double trade = e.capability[0];
    const double technology = n_dims > 1 ? e.capability[1] : 0.0;
    e.growth = 2.0 + options.growth_trade * trade + options.growth_technology * technology -
               0.8 * (e.log_gdp0 - 9.0) + options.noise * normal(rng);
  }

  nlohmann::json config;
  config["dimensions"] = nlohmann::json::array();
  std::map<std::pair<std::string, Year>, double> trade_totals;
  for (std::size_t d = 0; d < n_dims; ++d) {
    const auto& name = options.dimensions[d];
    const auto kind = infer_kind(name);
    std::vector<double> level(static_cast<std::size_t>(options.activities));
    for (auto& q : level) q = normal(rng);

    std::string text = kind == DimensionKind::Research ? "economy,activity,year,value,citations_recent\n"
                                                       : "economy,activity,year,value\n";
    for (Year year : options.years) {
      for (const auto& e : economies) {
        const double cap = e.capability[d] + 0.1 * normal(rng);
        for (std::size_t a = 0; a < level.size(); ++a) {
          const double gap = cap - level[a];
          if (!(uniform(rng) < 0.45 * sigmoid(2.5 * gap))) continue;
          const double shock = normal(rng);
          const std::string activity = fmt::format("A{:04d}", a);
          switch (kind) {
            case DimensionKind::Trade:
            case DimensionKind::Generic: {
              const double value = std::exp(16.0 + e.size + 0.8 * gap + shock);
              text += fmt::format("{},{},{},{:.1f}\n", e.code, activity, year, value);
              trade_totals[{e.code, year}] += std::stod(fmt::format("{:.1f}", value));
              break;
            }
            case DimensionKind::Technology: {
              const double value = std::round(std::exp(1.5 + 0.5 * e.size + 0.5 * gap + shock));
              text += fmt::format("{},{},{},{:.0f}\n", e.code, activity, year, std::max(1.0, value));
              break;
            }
            case DimensionKind::Research: {
              const double docs = std::max(1.0, std::round(std::exp(2.0 + 0.5 * e.size + 0.5 * gap + shock)));
              const double citations = std::round(docs * std::exp(4.5 + 0.5 * normal(rng)));
              text += fmt::format("{},{},{},{:.0f},{:.0f}\n", e.code, activity, year, docs, citations);
              break;
            }
          }
        }
      }
    }
    const std::string file = name + ".csv";
    write_file(dir / file, text);
    config["dimensions"].push_back({{"name", name}, {"path", file}});
  }

  // Aux table and macro series; yearly draws in a fixed order.
  std::string aux = "economy,year,population,total_exports\n";
  std::string gdp = "economy,year,value\n", pop = gdp, gini = gdp, ghg = gdp, human = gdp;
  for (const auto& e : economies) {
    double log_gdp = e.log_gdp0;
    const double trade = e.capability[0];
    const double technology = n_dims > 1 ? e.capability[1] : 0.0;
    const double research = n_dims > 2 ? e.capability[2] : 0.0;
    for (Year year = kFirstYear; year <= kLastYear; ++year) {
      const double population = std::exp(e.log_pop0 + 0.01 * (year - kFirstYear));
      const double income = std::exp(log_gdp);
      gdp += fmt::format("{},{},{:.6f}\n", e.code, year, income);
      pop += fmt::format("{},{},{:.0f}\n", e.code, year, population);
      human += fmt::format("{},{},{:.6f}\n", e.code, year, e.human_capital + 0.01 * (year - kFirstYear));
      if (year <= 2015) {
        const double x = log_gdp - 9.0;
        const double g = 40.0 - 3.0 * trade - 2.0 * technology + 2.0 * x - 1.5 * x * x + 1.5 * normal(rng);
        gini += fmt::format("{},{},{:.6f}\n", e.code, year, std::clamp(g, 15.0, 70.0));
      }
      if (year <= 2018) {
        const double intensity = -13.0 - 0.3 * trade - 0.2 * technology - 0.2 * research -
                                 0.15 * trade * research + 0.2 * normal(rng);
        ghg += fmt::format("{},{},{:.6g}\n", e.code, year, std::exp(intensity) * income * population);
      }
      if (std::find(options.years.begin(), options.years.end(), year) != options.years.end()) {
        auto it = trade_totals.find({e.code, year});
        aux += fmt::format("{},{},{:.0f},{:.1f}\n", e.code, year, population,
                           it == trade_totals.end() ? 0.0 : it->second);
      }
      log_gdp += (e.growth + 0.5 * normal(rng)) / 100.0;
    }
  }
  write_file(dir / "aux.csv", aux);
  const std::pair<const char*, const std::string*> series[] = {
      {"gdp_pc", &gdp}, {"population", &pop}, {"gini", &gini}, {"ghg", &ghg}, {"human_capital", &human}};
  config["series"] = nlohmann::json::object();
  for (const auto& [name, text] : series) {
    write_file(dir / (std::string(name) + ".csv"), *text);
    config["series"][name] = std::string(name) + ".csv";
  }

  config["aux"] = "aux.csv";
  config["apply_filters"] = options.filters;
  config["studies"] = {"growth", "inequality", "emissions"};
  if (std::find(options.years.begin(), options.years.end(), 2014) != options.years.end())
    config["cross_dimension_year"] = 2014;
  config["seed"] = options.seed;
  config["output_dir"] = "out";
  const fs::path path = dir / "config.json";
  write_file(path, config.dump(2) + "\n");
  return path;
}

}  // namespace mdc
