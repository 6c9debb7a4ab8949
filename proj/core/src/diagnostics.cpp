#include "mdc/diagnostics.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace mdc {

namespace {
std::shared_ptr<spdlog::logger> logger() {
  static auto instance = [] {
    auto l = spdlog::stderr_color_mt("mdc");
    l->set_pattern("[%l] %v");
    return l;
  }();
  return instance;
}
}  // namespace

void Warnings::add(std::string message) { messages_.push_back(std::move(message)); }

bool Warnings::contains(std::string_view needle) const {
  for (const auto& m : messages_)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

void Warnings::append(const Warnings& other) {
  messages_.insert(messages_.end(), other.messages_.begin(), other.messages_.end());
}

void warn(Warnings* sink, std::string message) {
  logger()->warn(message);
  if (sink) sink->add(std::move(message));
}

void log_error(const std::string& message) { logger()->error(message); }

void set_log_level_quiet(bool quiet) {
  logger()->set_level(quiet ? spdlog::level::err : spdlog::level::info);
}

}  // namespace mdc
