#pragma once

#include <spdlog/spdlog.h>

namespace gpf {

/// Shared stderr logger emitting `key=value` records. Level comes from the
/// GPF_LOG environment variable (trace, debug, info, warn, error, off);
/// default warn.
spdlog::logger& logger();

}  // namespace gpf
