#include "gpf/logging.hpp"

#include <cstdlib>
#include <memory>

#include <spdlog/sinks/stdout_sinks.h>

namespace gpf {

spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto log = std::make_shared<spdlog::logger>("gpf", sink);
    log->set_pattern("ts=%Y-%m-%dT%H:%M:%S.%e level=%l %v");
    const char* level = std::getenv("GPF_LOG");
    log->set_level(level != nullptr ? spdlog::level::from_str(level) : spdlog::level::warn);
    return log;
  }();
  return *instance;
}

}  // namespace gpf
