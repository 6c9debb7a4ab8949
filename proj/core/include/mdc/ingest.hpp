#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mdc/diagnostics.hpp"
#include "mdc/types.hpp"

namespace mdc {

struct OutputRecord {
  std::string economy;
  std::string activity;
  Year year = 0;
  double value = 0.0;
  /// Citations to the pair's documents over the trailing window (research only).
  std::optional<double> citations_recent;
};

/// Long-form output observations of one dimension. Records are kept sorted by
/// (year, economy, activity) with unique keys.
struct OutputPanel {
  DimensionId dimension;
  DimensionKind kind = DimensionKind::Generic;
  std::vector<OutputRecord> records;
  bool has_citations = false;

  std::vector<Year> years() const;
  std::size_t size() const noexcept { return records.size(); }
  /// Total output per economy for one year.
  std::map<std::string, double> economy_totals(Year year) const;
};

struct AuxRow {
  double population = 0.0;
  double total_exports = 0.0;
  std::optional<double> patent_applications;
  std::optional<double> publications;
};

/// Per economy-year auxiliary data: population and total exports, optionally
/// patent and publication totals used by the economy-level filter.
class AuxTable {
 public:
  using Key = std::pair<std::string, Year>;

  void set(const std::string& economy, Year year, AuxRow row);
  const AuxRow* find(const std::string& economy, Year year) const;
  AuxRow* find_mutable(const std::string& economy, Year year);
  bool empty() const noexcept { return rows_.empty(); }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::map<Key, AuxRow>& rows() const noexcept { return rows_; }

 private:
  std::map<Key, AuxRow> rows_;
};

/// Eligibility thresholds. Economy-level checks are strict (value must exceed
/// the threshold), except where noted. A threshold of zero disables its check.
struct EligibilityRule {
  double min_population = 1e6;              // population > threshold
  double min_total_exports = 1e9;           // total exports (USD) > threshold
  double min_patent_applications = 4;       // patent applications > threshold
  double min_publications = 30;             // publications > threshold
  double min_world_product_exports = 5e5;   // trade: keep activity if world total >= threshold
  double min_patent_class_applications = 5; // technology: keep class if total > threshold
  double research_doc_floor = 3;            // research: zero pair if documents < floor
  double research_citation_floor = 400;     // research: zero pair if citations < floor
  double min_category_publications = 30;    // research: keep category if total >= threshold

  static EligibilityRule disabled();
  void validate() const;
};

OutputPanel parse_output_csv(std::istream& in, const DimensionId& dimension,
                             Warnings* warnings = nullptr);
/// Loads `economy,activity,year,value[,citations_recent]`, summing duplicates.
OutputPanel load_output_csv(const std::filesystem::path& path, const DimensionId& dimension,
                            Warnings* warnings = nullptr);

AuxTable parse_aux_csv(std::istream& in);
/// Loads `economy,year,population,total_exports[,patent_applications,publications]`.
AuxTable load_aux_csv(const std::filesystem::path& path);

/// Fills the patent or publication totals of `aux` from a technology or
/// research panel (economies absent from the panel get a zero total for the
/// panel's years). Other panel kinds leave `aux` unchanged.
AuxTable with_dimension_totals(AuxTable aux, const OutputPanel& panel);

/// Applies economy-level then activity-level filters for the panel's kind.
OutputPanel apply_eligibility(const OutputPanel& panel, const AuxTable& aux,
                              const EligibilityRule& rule, Warnings* warnings = nullptr);

void write_output_csv(std::ostream& out, const OutputPanel& panel);

}  // namespace mdc
