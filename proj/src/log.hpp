#pragma once

#include <spdlog/logger.h>

namespace vf {

/// Diagnostic logger writing to stderr. Silent unless VF_LOG is set to
/// "debug" or "info".
spdlog::logger& logger();

}  // namespace vf
