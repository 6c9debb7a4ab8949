#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mdc/ingest.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Revealed comparative advantage of each economy (row) in each activity
/// (column). Rows and columns are ordered by code.
struct RcaMatrix {
  DimensionId dimension;
  Year period = 0;
  std::vector<std::string> economies;
  std::vector<std::string> activities;
  Eigen::MatrixXd values;
};

/// Binary economy x activity specialization matrix with its marginals.
/// Entries are stored as 0.0 / 1.0; after pruning every marginal is >= 1.
struct SpecializationMatrix {
  DimensionId dimension;
  Year period = 0;
  std::vector<std::string> economies;
  std::vector<std::string> activities;
  Eigen::MatrixXd entries;
  Eigen::VectorXd diversity;  // row sums
  Eigen::VectorXd ubiquity;   // column sums

  Eigen::Index n_economies() const noexcept { return entries.rows(); }
  Eigen::Index n_activities() const noexcept { return entries.cols(); }
};

/// Dense output matrix for one period, rows/columns sorted by code.
struct OutputMatrix {
  std::vector<std::string> economies;
  std::vector<std::string> activities;
  Eigen::MatrixXd values;
};

OutputMatrix output_matrix(const OutputPanel& panel, Year period);

RcaMatrix compute_rca(const OutputPanel& panel, Year period);

/// Matrix form of compute_rca. Zero-marginal rows and columns are dropped
/// before the ratio is formed.
RcaMatrix compute_rca(const OutputMatrix& output, const DimensionId& dimension = DimensionId{},
                      Year period = 0);

/// M = [R >= threshold], followed by iterative removal of empty rows/columns.
SpecializationMatrix binarize(const RcaMatrix& rca, double threshold = 1.0);

/// Wraps an explicit 0/1 matrix, pruning empty rows/columns and computing
/// marginals. Codes default to E0.., A0.. when not given.
SpecializationMatrix make_specialization(const Eigen::MatrixXd& binary,
                                         std::vector<std::string> economies = {},
                                         std::vector<std::string> activities = {});

/// Long-form `economy,activity,value` with one row per cell.
void write_specialization_csv(std::ostream& out, const SpecializationMatrix& spec);

}  // namespace mdc
