#pragma once

#include <string>
#include <vector>

namespace mdc {

/// Collects non-fatal warnings (dropped economies, skipped filters, ...).
/// Every warning is also forwarded to the process logger on stderr.
class Warnings {
 public:
  void add(std::string message);
  const std::vector<std::string>& messages() const noexcept { return messages_; }
  bool empty() const noexcept { return messages_.empty(); }
  std::size_t size() const noexcept { return messages_.size(); }
  bool contains(std::string_view needle) const;
  void append(const Warnings& other);

 private:
  std::vector<std::string> messages_;
};

/// Logs `message` and records it in `sink` when one is given.
void warn(Warnings* sink, std::string message);

/// Logs an error on stderr.
void log_error(const std::string& message);

/// Silences or restores the stderr logger (tests and benchmarks).
void set_log_level_quiet(bool quiet);

}  // namespace mdc
