#include "mdc/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

std::vector<Year> OutputPanel::years() const {
  std::vector<Year> out;
  for (const auto& r : records)
    if (out.empty() || out.back() != r.year) out.push_back(r.year);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::map<std::string, double> OutputPanel::economy_totals(Year year) const {
  std::map<std::string, double> totals;
  for (const auto& r : records)
    if (r.year == year) totals[r.economy] += r.value;
  return totals;
}

void AuxTable::set(const std::string& economy, Year year, AuxRow row) {
  rows_[{economy, year}] = std::move(row);
}

const AuxRow* AuxTable::find(const std::string& economy, Year year) const {
  auto it = rows_.find({economy, year});
  return it == rows_.end() ? nullptr : &it->second;
}

AuxRow* AuxTable::find_mutable(const std::string& economy, Year year) {
  auto it = rows_.find({economy, year});
  return it == rows_.end() ? nullptr : &it->second;
}

EligibilityRule EligibilityRule::disabled() {
  EligibilityRule r;
  r.min_population = 0;
  r.min_total_exports = 0;
  r.min_patent_applications = 0;
  r.min_publications = 0;
  r.min_world_product_exports = 0;
  r.min_patent_class_applications = 0;
  r.research_doc_floor = 0;
  r.research_citation_floor = 0;
  r.min_category_publications = 0;
  return r;
}

void EligibilityRule::validate() const {
  const double values[] = {min_population,           min_total_exports,
                           min_patent_applications,  min_publications,
                           min_world_product_exports, min_patent_class_applications,
                           research_doc_floor,       research_citation_floor,
                           min_category_publications};
  for (double v : values)
    if (!(v >= 0.0)) throw Error(ErrorKind::Config, "eligibility thresholds must be >= 0");
}

namespace {

bool record_less(const OutputRecord& a, const OutputRecord& b) {
  return std::tie(a.year, a.economy, a.activity) < std::tie(b.year, b.economy, b.activity);
}

bool same_key(const OutputRecord& a, const OutputRecord& b) {
  return a.year == b.year && a.economy == b.economy && a.activity == b.activity;
}

void sort_and_merge(std::vector<OutputRecord>& records) {
  std::sort(records.begin(), records.end(), record_less);
  std::vector<OutputRecord> merged;
  merged.reserve(records.size());
  for (auto& r : records) {
    if (!merged.empty() && same_key(merged.back(), r)) {
      auto& m = merged.back();
      m.value += r.value;
      if (r.citations_recent) m.citations_recent = m.citations_recent.value_or(0.0) + *r.citations_recent;
    } else {
      merged.push_back(std::move(r));
    }
  }
  records = std::move(merged);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

OutputPanel parse_output_csv(std::istream& in, const DimensionId& dimension, Warnings* warnings) {
  csv::Reader reader(in);
  const auto economy = reader.require("economy");
  const auto activity = reader.require("activity");
  const auto year = reader.require("year");
  const auto value = reader.require("value");
  const auto citations = reader.find("citations_recent");

  OutputPanel panel;
  panel.dimension = dimension;
  panel.kind = infer_kind(dimension.name());
  panel.has_citations = citations.has_value();

  std::vector<std::string> row;
  while (reader.next(row)) {
    const auto n = reader.row_number();
    auto y = csv::parse_int(row[year]);
    if (!y) throw Error(ErrorKind::Validation, fmt::format("row {}: unparseable year '{}'", n, row[year]));
    auto v = csv::parse_double(row[value]);
    if (!v) throw Error(ErrorKind::Validation, fmt::format("row {}: unparseable value '{}'", n, row[value]));
    if (*v < 0.0) throw Error(ErrorKind::Validation, fmt::format("row {}: negative value {}", n, *v));
    if (row[economy].empty() || row[activity].empty())
      throw Error(ErrorKind::Validation, fmt::format("row {}: empty economy or activity code", n));
    OutputRecord rec{row[economy], row[activity], static_cast<Year>(*y), *v, std::nullopt};
    if (citations && !row[*citations].empty()) {
      auto c = csv::parse_double(row[*citations]);
      if (!c || *c < 0.0)
        throw Error(ErrorKind::Validation,
                    fmt::format("row {}: invalid citations_recent '{}'", n, row[*citations]));
      rec.citations_recent = *c;
    }
    panel.records.push_back(std::move(rec));
  }
  const auto raw = panel.records.size();
  sort_and_merge(panel.records);
  if (warnings && raw != panel.records.size())
    warnings->add(fmt::format("{}: summed {} duplicate rows", dimension.name(), raw - panel.records.size()));
  return panel;
}

OutputPanel load_output_csv(const std::filesystem::path& path, const DimensionId& dimension,
                            Warnings* warnings) {
  auto in = open_input(path);
  return parse_output_csv(in, dimension, warnings);
}

AuxTable parse_aux_csv(std::istream& in) {
  csv::Reader reader(in);
  const auto economy = reader.require("economy");
  const auto year = reader.require("year");
  const auto population = reader.require("population");
  const auto exports = reader.require("total_exports");
  const auto patents = reader.find("patent_applications");
  const auto publications = reader.find("publications");

  auto number = [&](const std::string& text, std::size_t n, const char* what) {
    auto v = csv::parse_double(text);
    if (!v || *v < 0.0)
      throw Error(ErrorKind::Validation, fmt::format("aux row {}: invalid {} '{}'", n, what, text));
    return *v;
  };

  AuxTable aux;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const auto n = reader.row_number();
    auto y = csv::parse_int(row[year]);
    if (!y) throw Error(ErrorKind::Validation, fmt::format("aux row {}: unparseable year", n));
    AuxRow r;
    r.population = number(row[population], n, "population");
    r.total_exports = number(row[exports], n, "total_exports");
    if (patents && !row[*patents].empty()) r.patent_applications = number(row[*patents], n, "patent_applications");
    if (publications && !row[*publications].empty())
      r.publications = number(row[*publications], n, "publications");
    aux.set(row[economy], static_cast<Year>(*y), r);
  }
  return aux;
}

AuxTable load_aux_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_aux_csv(in);
}

AuxTable with_dimension_totals(AuxTable aux, const OutputPanel& panel) {
  if (panel.kind != DimensionKind::Technology && panel.kind != DimensionKind::Research) return aux;
  const auto years = panel.years();
  std::map<std::pair<std::string, Year>, double> totals;
  for (const auto& r : panel.records) totals[{r.economy, r.year}] += r.value;
  for (const auto& [key, row] : aux.rows()) {
    if (!std::binary_search(years.begin(), years.end(), key.second)) continue;
    auto it = totals.find(key);
    const double total = it == totals.end() ? 0.0 : it->second;
    auto* target = aux.find_mutable(key.first, key.second);
    if (panel.kind == DimensionKind::Technology)
      target->patent_applications = total;
    else
      target->publications = total;
  }
  return aux;
}

OutputPanel apply_eligibility(const OutputPanel& panel, const AuxTable& aux,
                              const EligibilityRule& rule, Warnings* warnings) {
  rule.validate();
  if (aux.empty()) throw Error(ErrorKind::Config, "auxiliary table is empty");

  const bool needs_aux = rule.min_population > 0 || rule.min_total_exports > 0 ||
                         rule.min_patent_applications > 0 || rule.min_publications > 0;

  // Economy-level filter, decided once per (economy, year).
  std::map<std::pair<std::string, Year>, bool> eligible;
  std::map<std::string, std::vector<Year>> missing_aux;
  bool patents_skipped = false;
  bool publications_skipped = false;
  for (const auto& r : panel.records) {
    auto [it, inserted] = eligible.try_emplace({r.economy, r.year}, true);
    if (!inserted || !needs_aux) continue;
    const AuxRow* row = aux.find(r.economy, r.year);
    if (!row) {
      it->second = false;
      missing_aux[r.economy].push_back(r.year);
      continue;
    }
    bool ok = true;
    if (rule.min_population > 0 && !(row->population > rule.min_population)) ok = false;
    if (rule.min_total_exports > 0 && !(row->total_exports > rule.min_total_exports)) ok = false;
    if (rule.min_patent_applications > 0) {
      if (row->patent_applications)
        ok = ok && *row->patent_applications > rule.min_patent_applications;
      else
        patents_skipped = true;
    }
    if (rule.min_publications > 0) {
      if (row->publications)
        ok = ok && *row->publications > rule.min_publications;
      else
        publications_skipped = true;
    }
    it->second = ok;
  }
  for (const auto& [economy, years] : missing_aux)
    warn(warnings, fmt::format("{}: economy {} dropped for {} year(s) without auxiliary data",
                               panel.dimension.name(), economy, years.size()));
  if (patents_skipped)
    warn(warnings, fmt::format("{}: patent-application threshold skipped where no totals are available",
                               panel.dimension.name()));
  if (publications_skipped)
    warn(warnings, fmt::format("{}: publication threshold skipped where no totals are available",
                               panel.dimension.name()));

  OutputPanel out;
  out.dimension = panel.dimension;
  out.kind = panel.kind;
  out.has_citations = panel.has_citations;
  out.records.reserve(panel.records.size());
  for (const auto& r : panel.records)
    if (eligible.at({r.economy, r.year})) out.records.push_back(r);

  // Research pair floors.
  if (out.kind == DimensionKind::Research) {
    const bool use_docs = rule.research_doc_floor > 0;
    bool use_citations = rule.research_citation_floor > 0;
    if (use_citations && !out.has_citations) {
      warn(warnings, fmt::format("{}: no citations_recent column; citation floor skipped",
                                 out.dimension.name()));
      use_citations = false;
    }
    if (use_docs || use_citations) {
      std::erase_if(out.records, [&](const OutputRecord& r) {
        if (use_docs && r.value < rule.research_doc_floor) return true;
        if (use_citations && r.citations_recent && *r.citations_recent < rule.research_citation_floor)
          return true;
        return false;
      });
    }
  }

  // Activity-level totals over the surviving economies.
  std::function<bool(double)> keep_activity;
  switch (out.kind) {
    case DimensionKind::Trade:
      if (rule.min_world_product_exports > 0)
        keep_activity = [&](double total) { return total >= rule.min_world_product_exports; };
      break;
    case DimensionKind::Technology:
      if (rule.min_patent_class_applications > 0)
        keep_activity = [&](double total) { return total > rule.min_patent_class_applications; };
      break;
    case DimensionKind::Research:
      if (rule.min_category_publications > 0)
        keep_activity = [&](double total) { return total >= rule.min_category_publications; };
      break;
    case DimensionKind::Generic:
      break;
  }
  if (keep_activity) {
    std::map<std::pair<std::string, Year>, double> totals;
    for (const auto& r : out.records) totals[{r.activity, r.year}] += r.value;
    std::erase_if(out.records, [&](const OutputRecord& r) {
      return !keep_activity(totals.at({r.activity, r.year}));
    });
  }
  return out;
}

void write_output_csv(std::ostream& out, const OutputPanel& panel) {
  out << (panel.has_citations ? "economy,activity,year,value,citations_recent\n"
                              : "economy,activity,year,value\n");
  for (const auto& r : panel.records) {
    std::vector<std::string> row{r.economy, r.activity, std::to_string(r.year), csv::format_double(r.value)};
    if (panel.has_citations)
      row.push_back(r.citations_recent ? csv::format_double(*r.citations_recent) : std::string{});
    csv::write_row(out, row);
  }
}

}  // namespace mdc
