#include "mdc/instrument.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

SimilarityScores similarity(const SpecializationMatrix& spec) {
  if (spec.entries.size() == 0 || (spec.diversity.array() < 1.0).any())
    throw Error(ErrorKind::Validation, "specialization matrix must be pruned");
  const Eigen::MatrixXd common = spec.entries * spec.entries.transpose();
  const Eigen::Index n = common.rows();
  SimilarityScores out;
  out.dimension = spec.dimension;
  out.period = spec.period;
  out.economies = spec.economies;
  out.phi.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double value = common(i, j) / std::max(spec.diversity[i], spec.diversity[j]);
      out.phi(i, j) = value;
      out.phi(j, i) = value;
    }
  }
  return out;
}

ComplexityVector InstrumentMap::as_vector() const {
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return entries[a].economy < entries[b].economy; });
  ComplexityVector v{dimension, period, Metric::Eci, normalization, {}, {}};
  for (auto i : order) {
    v.codes.push_back(entries[i].economy);
    v.scores.push_back(entries[i].value);
  }
  return v;
}

InstrumentMap instrument_eci(const SimilarityScores& sim, const ComplexityVector& eci, int k,
                             Warnings* warnings) {
  if (k < 1) throw Error(ErrorKind::Config, "instrument k must be >= 1");
  const auto n = sim.economies.size();
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = eci.score(sim.economies[i]);
    if (!s)
      throw Error(ErrorKind::Validation,
                  fmt::format("no {} score for economy {}", to_string(eci.metric), sim.economies[i]));
    score[i] = *s;
  }

  InstrumentMap map;
  map.dimension = sim.dimension;
  map.period = sim.period;
  map.normalization = eci.normalization;
  map.k = k;
  map.entries.reserve(n);
  std::vector<std::size_t> others;
  for (std::size_t c = 0; c < n; ++c) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) others.push_back(j);
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), others.size());
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(take), others.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double pa = sim.phi(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a));
                        const double pb = sim.phi(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(b));
                        if (pa != pb) return pa > pb;
                        return sim.economies[a] < sim.economies[b];
                      });
    InstrumentEntry entry;
    entry.economy = sim.economies[c];
    entry.flagged = take < static_cast<std::size_t>(k);
    double sum = 0.0;
    for (std::size_t t = 0; t < take; ++t) {
      entry.neighbors.push_back(sim.economies[others[t]]);
      sum += score[others[t]];
    }
    entry.value = take > 0 ? sum / static_cast<double>(take) : score[c];
    if (entry.flagged)
      warn(warnings, fmt::format("{} {}: economy {} has only {} neighbor(s) for k={}",
                                 sim.dimension.name(), sim.period, entry.economy, take, k));
    map.entries.push_back(std::move(entry));
  }
  return map;
}

void write_instrument_csv(std::ostream& out, const InstrumentMap& map) {
  std::vector<std::string> header{"economy"};
  for (int i = 1; i <= map.k; ++i) header.push_back(fmt::format("n{}", i));
  header.push_back("instrumented_eci");
  csv::write_row(out, header);
  for (const auto& e : map.entries) {
    std::vector<std::string> row{e.economy};
    for (int i = 0; i < map.k; ++i)
      row.push_back(static_cast<std::size_t>(i) < e.neighbors.size() ? e.neighbors[static_cast<std::size_t>(i)] : "");
    row.push_back(csv::format_double(e.value));
    csv::write_row(out, row);
  }
}

}  // namespace mdc
