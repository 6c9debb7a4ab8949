#include "mdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"
#include "mdc/stats.hpp"

namespace mdc {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Eci: return "eci";
    case Metric::Pci: return "pci";
    case Metric::Fitness: return "fitness";
    case Metric::Complexity: return "complexity";
    case Metric::Hhi: return "hhi";
    case Metric::Entropy: return "entropy";
    case Metric::Intensity: return "intensity";
  }
  return "unknown";
}

std::string_view to_string(Normalization normalization) {
  switch (normalization) {
    case Normalization::Raw: return "raw";
    case Normalization::ZScore: return "zscore";
    case Normalization::MinMax: return "minmax";
    case Normalization::Log: return "log";
  }
  return "unknown";
}

std::optional<double> ComplexityVector::score(std::string_view code) const {
  auto it = std::lower_bound(codes.begin(), codes.end(), code);
  if (it == codes.end() || *it != code) return std::nullopt;
  return scores[static_cast<std::size_t>(it - codes.begin())];
}

namespace {

constexpr double kImagTolerance = 1e-8;
constexpr double kResidualTolerance = 1e-8;
constexpr double kGapTolerance = 1e-10;
constexpr double kSignTolerance = 1e-9;

ComplexityVector make_vector(const DimensionId& dimension, Year period, Metric metric,
                             Normalization normalization, const std::vector<std::string>& codes,
                             std::span<const double> scores) {
  std::vector<std::size_t> order(codes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return codes[a] < codes[b]; });
  ComplexityVector v{dimension, period, metric, normalization, {}, {}};
  v.codes.reserve(codes.size());
  v.scores.reserve(codes.size());
  for (auto i : order) {
    v.codes.push_back(codes[i]);
    v.scores.push_back(scores[i]);
  }
  return v;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void require_pruned(const SpecializationMatrix& spec) {
  if (spec.entries.size() == 0 || (spec.diversity.array() < 1.0).any() ||
      (spec.ubiquity.array() < 1.0).any())
    throw Error(ErrorKind::Validation, "specialization matrix must be pruned (all marginals >= 1)");
}

}  // namespace

EconomySimilarityMatrix economy_similarity(const SpecializationMatrix& spec) {
  require_pruned(spec);
  const Eigen::MatrixXd weighted = spec.entries * spec.ubiquity.cwiseInverse().asDiagonal();
  EconomySimilarityMatrix out;
  out.dimension = spec.dimension;
  out.period = spec.period;
  out.economies = spec.economies;
  out.entries = spec.diversity.cwiseInverse().asDiagonal() * (weighted * spec.entries.transpose());
  return out;
}

EciResult eci(const SpecializationMatrix& spec) {
  require_pruned(spec);
  if (spec.n_economies() < 3 || spec.n_activities() < 3)
    throw Error(ErrorKind::Degenerate,
                fmt::format("ECI needs at least 3 economies and 3 activities (have {}x{})",
                            spec.n_economies(), spec.n_activities()));

  const auto similarity = economy_similarity(spec);
  const Eigen::MatrixXd& mcc = similarity.entries;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(mcc, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::Numerical, "eigendecomposition of the similarity matrix failed");

  const Eigen::VectorXcd values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return values[a].real() > values[b].real(); });

  const std::complex<double> lambda2 = values[order[1]];
  if (std::abs(lambda2.imag()) > kImagTolerance)
    throw Error(ErrorKind::Numerical,
                fmt::format("second eigenvalue is complex ({} + {}i)", lambda2.real(), lambda2.imag()));
  const double gap = std::min(values[order[0]].real() - lambda2.real(),
                              lambda2.real() - values[order[2]].real());
  if (gap < kGapTolerance)
    throw Error(ErrorKind::Degenerate,
                fmt::format("second eigenvalue is not unique (spectral gap {:.3g})", gap));

  // Rotate the eigenvector so its largest component is real, then drop the
  // (numerically zero) imaginary part.
  Eigen::VectorXcd cv = solver.eigenvectors().col(order[1]);
  Eigen::Index pivot = 0;
  cv.cwiseAbs().maxCoeff(&pivot);
  cv *= std::polar(1.0, -std::arg(cv[pivot]));
  Eigen::VectorXd v = cv.real();
  v.normalize();

  const double lambda = lambda2.real();
  const double residual = (mcc * v - lambda * v).cwiseAbs().maxCoeff();
  if (!(residual < kResidualTolerance))
    throw Error(ErrorKind::Numerical, fmt::format("eigen residual {:.3g} exceeds 1e-8", residual));

  std::vector<double> z = stats::zscore(as_span(v));
  const double r = stats::pearson(z, as_span(spec.diversity));
  bool flip = r < 0.0;
  if (std::abs(r) < kSignTolerance) {
    // Uncorrelated with diversity: the first economy (by code) with a clearly
    // nonzero score is made positive.
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return spec.economies[a] < spec.economies[b]; });
    for (auto i : order) {
      if (std::abs(z[i]) > kSignTolerance) {
        flip = z[i] < 0.0;
        break;
      }
    }
  }
  if (flip)
    for (auto& x : z) x = -x;

  const Eigen::Map<const Eigen::VectorXd> eci_values(z.data(), static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd activity_avg =
      (spec.entries.transpose() * eci_values).cwiseQuotient(spec.ubiquity);
  const std::vector<double> pci = stats::zscore(as_span(activity_avg));

  EciResult result;
  result.eci = make_vector(spec.dimension, spec.period, Metric::Eci, Normalization::ZScore,
                           spec.economies, z);
  result.pci = make_vector(spec.dimension, spec.period, Metric::Pci, Normalization::ZScore,
                           spec.activities, pci);
  result.eigenvalue = lambda;
  result.spectral_gap = gap;
  result.residual = residual;
  return result;
}

ComplexityVector minmax(const ComplexityVector& v) {
  if (v.scores.size() < 2) throw Error(ErrorKind::Degenerate, "min-max needs at least two scores");
  const auto [lo, hi] = std::minmax_element(v.scores.begin(), v.scores.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw Error(ErrorKind::Degenerate, "cannot min-max scale a constant vector");
  ComplexityVector out = v;
  out.normalization = Normalization::MinMax;
  for (auto& s : out.scores) s = (s - min) / range;
  return out;
}

FitnessResult fitness(const SpecializationMatrix& spec, FitnessOptions options, Warnings* warnings) {
  require_pruned(spec);
  if (!(options.tol > 0.0)) throw Error(ErrorKind::Config, "fitness tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorKind::Config, "fitness max_iter must be >= 1");

  const Eigen::MatrixXd& m = spec.entries;
  Eigen::VectorXd f = Eigen::VectorXd::Ones(m.rows());
  Eigen::VectorXd q = Eigen::VectorXd::Ones(m.cols());
  double residual = std::numeric_limits<double>::infinity();
  bool clamped = false;
  int n = 0;
  for (n = 1; n <= options.max_iter; ++n) {
    Eigen::VectorXd f_next = m * q;
    f_next /= f_next.mean();
    Eigen::VectorXd q_next = (m.transpose() * f.cwiseInverse()).cwiseInverse();
    q_next /= q_next.mean();
    for (auto& x : f_next) {
      if (x < options.floor) {
        x = options.floor;
        clamped = true;
      }
    }
    residual = std::max((f_next - f).cwiseAbs().maxCoeff(), (q_next - q).cwiseAbs().maxCoeff());
    // (f, q) is the pair whose update moved less than tol; it is the one returned.
    if (residual < options.tol) break;
    f = std::move(f_next);
    q = std::move(q_next);
  }
  if (clamped)
    warn(warnings, fmt::format("{} {}: fitness clamped at {:g} for some economies",
                               spec.dimension.name(), spec.period, options.floor));
  if (!(residual < options.tol))
    throw Error(ErrorKind::Convergence,
                fmt::format("fitness did not converge in {} iterations (last residual {:.3g})",
                            options.max_iter, residual));

  const Eigen::VectorXd log_f = f.array().log();
  FitnessResult result;
  result.fitness = make_vector(spec.dimension, spec.period, Metric::Fitness, Normalization::Raw,
                               spec.economies, as_span(f));
  result.complexity = make_vector(spec.dimension, spec.period, Metric::Complexity,
                                  Normalization::Raw, spec.activities, as_span(q));
  result.log_fitness = make_vector(spec.dimension, spec.period, Metric::Fitness, Normalization::Log,
                                   spec.economies, as_span(log_f));
  result.iterations = n;
  result.residual = residual;
  return result;
}

namespace {

// Activity shares per economy for one period; zero-total economies are dropped.
template <typename Fn>
ComplexityVector share_metric(const OutputPanel& panel, Year period, Metric metric,
                              Warnings* warnings, Fn&& reduce) {
  std::vector<std::string> codes;
  std::vector<double> scores;
  std::vector<double> values;
  auto flush = [&](const std::string& economy) {
    double total = 0.0;
    for (double v : values) total += v;
    if (!(total > 0.0)) {
      warn(warnings, fmt::format("{} {}: economy {} has zero output; dropped",
                                 panel.dimension.name(), period, economy));
    } else {
      codes.push_back(economy);
      scores.push_back(reduce(values, total));
    }
    values.clear();
  };
  const std::string* current = nullptr;
  for (const auto& r : panel.records) {
    if (r.year != period) continue;
    if (current && *current != r.economy) flush(*current);
    current = &r.economy;
    values.push_back(r.value);
  }
  if (current) flush(*current);
  return make_vector(panel.dimension, period, metric, Normalization::Raw, codes, scores);
}

}  // namespace

ComplexityVector hhi(const OutputPanel& panel, Year period, Warnings* warnings) {
  return share_metric(panel, period, Metric::Hhi, warnings, [](const auto& values, double total) {
    double h = 0.0;
    for (double v : values) h += (v / total) * (v / total);
    return h;
  });
}

ComplexityVector entropy(const OutputPanel& panel, Year period, Warnings* warnings) {
  return share_metric(panel, period, Metric::Entropy, warnings, [](const auto& values, double total) {
    double e = 0.0;
    for (double v : values) {
      const double s = v / total;
      if (s > 0.0) e -= s * std::log(s);
    }
    return e;
  });
}

ComplexityVector intensity(const OutputPanel& panel, const AuxTable& aux, Year period,
                           Warnings* warnings) {
  std::vector<std::string> codes;
  std::vector<double> scores;
  for (const auto& [economy, total] : panel.economy_totals(period)) {
    const AuxRow* row = aux.find(economy, period);
    if (!row || !(row->population > 0.0)) {
      warn(warnings, fmt::format("{} {}: no population for economy {}; dropped",
                                 panel.dimension.name(), period, economy));
      continue;
    }
    if (!(total > 0.0)) {
      warn(warnings, fmt::format("{} {}: economy {} has zero output; dropped",
                                 panel.dimension.name(), period, economy));
      continue;
    }
    codes.push_back(economy);
    scores.push_back(std::log(total / row->population));
  }
  return make_vector(panel.dimension, period, Metric::Intensity, Normalization::Log, codes, scores);
}

void write_scores_csv(std::ostream& out, const ComplexityVector& v) {
  out << "code,score\n";
  for (std::size_t i = 0; i < v.size(); ++i) csv::write_row(out, {v.codes[i], csv::format_double(v.scores[i])});
}

}  // namespace mdc
