#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdc/regression.hpp"

namespace mdc {

struct CandidateReport {
  std::string id;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  Eigen::Index n_obs = 0;
  WaldResult vs_baseline;
  bool jointly_significant = false;
  bool all_terms_significant = false;
  bool passes = false;
  std::vector<std::pair<std::string, double>> term_p_values;
};

struct SelectionResult {
  double alpha = 0.05;
  RegressionFit baseline;
  std::vector<RegressionFit> fits;  // candidate order
  std::vector<CandidateReport> reports;
  /// Index of the chosen candidate; empty when no candidate passes and the
  /// baseline is kept.
  std::optional<std::size_t> chosen;

  bool found() const noexcept { return chosen.has_value(); }
  const RegressionFit& chosen_fit() const;
  std::string chosen_id() const;
};

/// Picks, among candidates whose complexity terms are jointly significant
/// against the baseline (Wald F) and individually significant (two-sided t),
/// the one with the highest R^2. Ties keep the earlier candidate.
SelectionResult select_multidimensional_model(std::span<const PanelDataset> candidates,
                                              const PanelDataset& baseline, double alpha = 0.05);

std::string format_selection_report(const SelectionResult& result);
void write_selection_csv(std::ostream& out, const SelectionResult& result);

}  // namespace mdc
