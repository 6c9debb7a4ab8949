#include "mdc/specialization.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

namespace {

template <typename T>
std::vector<T> select(const std::vector<T>& items, const std::vector<Eigen::Index>& keep) {
  std::vector<T> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(items[static_cast<std::size_t>(i)]);
  return out;
}

Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = m(rows[i], cols[j]);
  return out;
}

std::vector<Eigen::Index> nonzero(const Eigen::VectorXd& sums) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < sums.size(); ++i)
    if (sums[i] > 0.0) keep.push_back(i);
  return keep;
}

std::vector<std::string> default_codes(const char* prefix, Eigen::Index n) {
  std::vector<std::string> codes;
  for (Eigen::Index i = 0; i < n; ++i) codes.push_back(fmt::format("{}{}", prefix, i));
  return codes;
}

SpecializationMatrix prune(SpecializationMatrix m) {
  for (;;) {
    const Eigen::VectorXd rows = m.entries.rowwise().sum();
    const Eigen::VectorXd cols = m.entries.colwise().sum().transpose();
    auto keep_rows = nonzero(rows);
    auto keep_cols = nonzero(cols);
    if (keep_rows.size() == static_cast<std::size_t>(m.entries.rows()) &&
        keep_cols.size() == static_cast<std::size_t>(m.entries.cols())) {
      m.diversity = rows;
      m.ubiquity = cols;
      break;
    }
    m.entries = select(m.entries, keep_rows, keep_cols);
    m.economies = select(m.economies, keep_rows);
    m.activities = select(m.activities, keep_cols);
  }
  if (m.entries.rows() == 0 || m.entries.cols() == 0)
    throw Error(ErrorKind::Degenerate, "specialization matrix is empty after pruning");
  return m;
}

}  // namespace

OutputMatrix output_matrix(const OutputPanel& panel, Year period) {
  OutputMatrix out;
  for (const auto& r : panel.records) {
    if (r.year != period) continue;
    out.economies.push_back(r.economy);
    out.activities.push_back(r.activity);
  }
  if (out.economies.empty())
    throw Error(ErrorKind::EmptyMatrix,
                fmt::format("{}: no records for period {}", panel.dimension.name(), period));
  for (auto* codes : {&out.economies, &out.activities}) {
    std::sort(codes->begin(), codes->end());
    codes->erase(std::unique(codes->begin(), codes->end()), codes->end());
  }
  std::unordered_map<std::string, Eigen::Index> col;
  for (std::size_t j = 0; j < out.activities.size(); ++j) col.emplace(out.activities[j], static_cast<Eigen::Index>(j));
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.economies.size()),
                                     static_cast<Eigen::Index>(out.activities.size()));
  // Records are sorted by (year, economy), so rows advance monotonically.
  Eigen::Index row = -1;
  const std::string* current = nullptr;
  for (const auto& r : panel.records) {
    if (r.year != period) continue;
    if (!current || *current != r.economy) {
      current = &r.economy;
      row = std::lower_bound(out.economies.begin(), out.economies.end(), r.economy) - out.economies.begin();
    }
    out.values(row, col.at(r.activity)) += r.value;
  }
  return out;
}

RcaMatrix compute_rca(const OutputPanel& panel, Year period) {
  return compute_rca(output_matrix(panel, period), panel.dimension, period);
}

RcaMatrix compute_rca(const OutputMatrix& output, const DimensionId& dimension, Year period) {
  if (output.values.size() == 0) throw Error(ErrorKind::EmptyMatrix, "output matrix is empty");
  if ((output.values.array() < 0.0).any() || !output.values.allFinite())
    throw Error(ErrorKind::Validation, "output matrix must be finite and non-negative");
  const double total = output.values.sum();
  if (!(total > 0.0)) throw Error(ErrorKind::Degenerate, "output matrix has zero total");

  const auto keep_rows = nonzero(output.values.rowwise().sum());
  const auto keep_cols = nonzero(output.values.colwise().sum().transpose());
  const Eigen::MatrixXd x = select(output.values, keep_rows, keep_cols);
  const Eigen::VectorXd xc = x.rowwise().sum();
  const Eigen::RowVectorXd xp = x.colwise().sum();

  RcaMatrix rca;
  rca.dimension = dimension;
  rca.period = period;
  rca.economies = select(output.economies, keep_rows);
  rca.activities = select(output.activities, keep_cols);
  rca.values = (x * total).array() / (xc * xp).array();
  return rca;
}

SpecializationMatrix binarize(const RcaMatrix& rca, double threshold) {
  if (!(threshold > 0.0)) throw Error(ErrorKind::Config, "RCA threshold must be positive");
  SpecializationMatrix m;
  m.dimension = rca.dimension;
  m.period = rca.period;
  m.economies = rca.economies;
  m.activities = rca.activities;
  m.entries = (rca.values.array() >= threshold).cast<double>().matrix();
  return prune(std::move(m));
}

SpecializationMatrix make_specialization(const Eigen::MatrixXd& binary,
                                         std::vector<std::string> economies,
                                         std::vector<std::string> activities) {
  if (((binary.array() != 0.0) && (binary.array() != 1.0)).any())
    throw Error(ErrorKind::Validation, "specialization entries must be 0 or 1");
  if (economies.empty()) economies = default_codes("E", binary.rows());
  if (activities.empty()) activities = default_codes("A", binary.cols());
  if (static_cast<Eigen::Index>(economies.size()) != binary.rows() ||
      static_cast<Eigen::Index>(activities.size()) != binary.cols())
    throw Error(ErrorKind::Validation, "code lists do not match matrix shape");
  SpecializationMatrix m;
  m.economies = std::move(economies);
  m.activities = std::move(activities);
  m.entries = binary;
  return prune(std::move(m));
}

void write_specialization_csv(std::ostream& out, const SpecializationMatrix& spec) {
  out << "economy,activity,value\n";
  for (Eigen::Index i = 0; i < spec.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < spec.entries.cols(); ++j)
      csv::write_row(out, {spec.economies[i], spec.activities[j], spec.entries(i, j) > 0.5 ? "1" : "0"});
}

}  // namespace mdc
