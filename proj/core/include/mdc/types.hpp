#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace mdc {

using Year = int;

/// Name of one output dimension ("trade", "technology", "research", ...).
class DimensionId {
 public:
  DimensionId() = default;
  explicit DimensionId(std::string name);

  const std::string& name() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend auto operator<=>(const DimensionId&, const DimensionId&) = default;

 private:
  std::string name_;
};

/// Which activity-level eligibility filter applies to a dimension.
enum class DimensionKind { Trade, Technology, Research, Generic };

/// "trade" -> Trade, "technology"/"patents" -> Technology,
/// "research"/"publications" -> Research, anything else -> Generic.
DimensionKind infer_kind(std::string_view name);
DimensionKind parse_kind(std::string_view text);
std::string_view to_string(DimensionKind kind);

}  // namespace mdc
