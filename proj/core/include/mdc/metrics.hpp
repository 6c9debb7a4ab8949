#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mdc/diagnostics.hpp"
#include "mdc/ingest.hpp"
#include "mdc/specialization.hpp"

namespace mdc {

enum class Metric { Eci, Pci, Fitness, Complexity, Hhi, Entropy, Intensity };
enum class Normalization { Raw, ZScore, MinMax, Log };

std::string_view to_string(Metric metric);
std::string_view to_string(Normalization normalization);

/// Scores of one metric for one dimension-period, sorted by code.
struct ComplexityVector {
  DimensionId dimension;
  Year period = 0;
  Metric metric = Metric::Eci;
  Normalization normalization = Normalization::Raw;
  std::vector<std::string> codes;
  std::vector<double> scores;

  std::size_t size() const noexcept { return codes.size(); }
  std::optional<double> score(std::string_view code) const;
};

/// Row-stochastic economy similarity matrix
///   M_cc' = sum_p M_cp M_c'p / (M_c M_p).
struct EconomySimilarityMatrix {
  DimensionId dimension;
  Year period = 0;
  std::vector<std::string> economies;
  Eigen::MatrixXd entries;
};

EconomySimilarityMatrix economy_similarity(const SpecializationMatrix& spec);

struct EciResult {
  /// z-scored, positively correlated with diversity (when uncorrelated, the
  /// first economy by code with a nonzero score is positive)
  ComplexityVector eci;
  ComplexityVector pci;  // z-scored activity averages of eci
  double eigenvalue = 0.0;
  /// min(lambda_1 - lambda_2, lambda_2 - lambda_3)
  double spectral_gap = 0.0;
  /// ||M_cc' v - lambda v||_inf for the unit-norm eigenvector
  double residual = 0.0;
};

/// Economic complexity from the eigenvector of the second largest eigenvalue
/// of the economy similarity matrix.
///
/// Requires a pruned matrix with at least three economies and activities.
/// Throws Numerical when the selected eigenvalue is complex (|Im| > 1e-8) or
/// the eigen residual exceeds 1e-8, and Degenerate when the eigenvalue is not
/// separated from its neighbours by more than 1e-10.
EciResult eci(const SpecializationMatrix& spec);

/// (x - min) / (max - min). Throws Degenerate for a constant vector.
ComplexityVector minmax(const ComplexityVector& v);

struct FitnessOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  /// Fitness values below this are clamped (with a warning) so 1/F stays finite.
  double floor = 1e-12;
};

struct FitnessResult {
  ComplexityVector fitness;      // raw F_c, mean 1
  ComplexityVector complexity;   // raw Q_p, mean 1
  ComplexityVector log_fitness;  // ln F_c
  int iterations = 0;
  double residual = 0.0;
};

/// Coupled fitness/complexity iteration from F = Q = 1 with per-step mean
/// normalization. Throws Convergence (reporting the last residual) when
/// the larger of max|F^n - F^(n-1)| and max|Q^n - Q^(n-1)| is still at or
/// above tol after max_iter steps. The returned pair is the one whose next
/// update moves by less than tol.
FitnessResult fitness(const SpecializationMatrix& spec, FitnessOptions options = {},
                      Warnings* warnings = nullptr);

/// Sum of squared activity shares per economy.
ComplexityVector hhi(const OutputPanel& panel, Year period, Warnings* warnings = nullptr);
/// Shannon entropy (natural log) of activity shares per economy.
ComplexityVector entropy(const OutputPanel& panel, Year period, Warnings* warnings = nullptr);
/// ln(total output / population) per economy.
ComplexityVector intensity(const OutputPanel& panel, const AuxTable& aux, Year period,
                           Warnings* warnings = nullptr);

/// `code,score` rows in code order.
void write_scores_csv(std::ostream& out, const ComplexityVector& v);

}  // namespace mdc
