#include "mdc/error.hpp"

#include <algorithm>
#include <cctype>

#include "mdc/types.hpp"

namespace mdc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Config: return "config";
    case ErrorKind::EmptyMatrix: return "empty-matrix";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::Specification: return "specification";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Io: return 3;
    case ErrorKind::Schema: return 4;
    case ErrorKind::Validation: return 5;
    case ErrorKind::EmptyMatrix:
    case ErrorKind::Degenerate: return 6;
    case ErrorKind::Numerical:
    case ErrorKind::Convergence: return 7;
    case ErrorKind::Rank:
    case ErrorKind::Specification: return 8;
  }
  return 1;
}

DimensionId::DimensionId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw Error(ErrorKind::Config, "dimension name must be non-empty");
}

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}
}  // namespace

DimensionKind infer_kind(std::string_view name) {
  const auto n = lower(name);
  if (n == "trade" || n == "exports") return DimensionKind::Trade;
  if (n == "technology" || n == "patents") return DimensionKind::Technology;
  if (n == "research" || n == "publications") return DimensionKind::Research;
  return DimensionKind::Generic;
}

DimensionKind parse_kind(std::string_view text) {
  const auto n = lower(text);
  if (n == "generic") return DimensionKind::Generic;
  const auto k = infer_kind(n);
  if (k == DimensionKind::Generic)
    throw Error(ErrorKind::Config, "unknown dimension kind '" + std::string(text) + "'");
  return k;
}

std::string_view to_string(DimensionKind kind) {
  switch (kind) {
    case DimensionKind::Trade: return "trade";
    case DimensionKind::Technology: return "technology";
    case DimensionKind::Research: return "research";
    case DimensionKind::Generic: return "generic";
  }
  return "generic";
}

}  // namespace mdc
