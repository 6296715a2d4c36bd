#include "log.hpp"

#include <cstdlib>
#include <memory>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace vf {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
    auto log = std::make_shared<spdlog::logger>("vf", sink);
    log->set_pattern("[vf %l] %v");
    log->set_level(spdlog::level::off);
    if (const char* env = std::getenv("VF_LOG")) {
      const std::string_view level(env);
      if (level == "debug") log->set_level(spdlog::level::debug);
      else if (level == "info") log->set_level(spdlog::level::info);
    }
    return log;
  }();
  return *instance;
}

}  // namespace vf
