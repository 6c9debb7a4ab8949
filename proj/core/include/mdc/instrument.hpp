#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mdc/diagnostics.hpp"
#include "mdc/metrics.hpp"
#include "mdc/specialization.hpp"

namespace mdc {

/// phi_cc' = |common specializations| / max(diversity_c, diversity_c').
/// Symmetric, in [0, 1], unit diagonal.
struct SimilarityScores {
  DimensionId dimension;
  Year period = 0;
  std::vector<std::string> economies;
  Eigen::MatrixXd phi;
};

SimilarityScores similarity(const SpecializationMatrix& spec);

struct InstrumentEntry {
  std::string economy;
  std::vector<std::string> neighbors;  // most similar first
  double value = 0.0;                  // mean score of the neighbors
  bool flagged = false;                // fewer than k neighbors were available
};

struct InstrumentMap {
  DimensionId dimension;
  Year period = 0;
  Normalization normalization = Normalization::ZScore;
  int k = 3;
  std::vector<InstrumentEntry> entries;  // economy order of the similarity matrix

  /// The instrumented scores as a vector with metric Eci.
  ComplexityVector as_vector() const;
};

/// Replaces every economy's score by the mean score of its k most similar
/// other economies. Ties on phi are broken by economy code.
InstrumentMap instrument_eci(const SimilarityScores& sim, const ComplexityVector& eci, int k = 3,
                             Warnings* warnings = nullptr);

/// `economy,n1,..,nk,instrumented_eci`.
void write_instrument_csv(std::ostream& out, const InstrumentMap& map);

}  // namespace mdc
