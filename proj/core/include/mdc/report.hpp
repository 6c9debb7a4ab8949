#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mdc/regression.hpp"
#include "mdc/study.hpp"

namespace mdc {

struct TableColumn {
  std::string header;
  RegressionFit fit;
};

struct FRow {
  std::string label;
  std::vector<std::optional<WaldResult>> cells;  // one per column
};

/// Regression table in the usual journal layout: one column per model,
/// coefficient with stars over its standard error, F-statistic rows, and
/// sample statistics.
struct RegressionTable {
  std::string title;
  std::string depvar_label;
  std::vector<TableColumn> columns;
  std::vector<FRow> f_rows;
  std::string notes =
      "Notes: Each regression includes period fixed effects. Standard errors in brackets. "
      "*p<0.1, **p<0.05, ***p<0.01.";
};

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1.
std::string stars(double p_value);

std::string render_text(const RegressionTable& table);
std::string render_csv(const RegressionTable& table);

/// Writes `<stem>.txt` and `<stem>.csv`; returns the two paths.
std::vector<std::filesystem::path> emit_table(const RegressionTable& table,
                                              const std::filesystem::path& stem);

RegressionTable study_table(const StudyResult& result);

}  // namespace mdc
