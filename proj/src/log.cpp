#include "symncd/log.hpp"

#include <atomic>

#include <spdlog/sinks/stdout_sinks.h>

namespace symncd {
namespace {

std::shared_ptr<spdlog::logger>& slot() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto made = std::make_shared<spdlog::logger>("symncd", std::move(sink));
    made->set_pattern("[%l] %v");
    return made;
  }();
  return instance;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() { return std::atomic_load(&slot()); }

void set_logger(std::shared_ptr<spdlog::logger> replacement) {
  std::atomic_store(&slot(), std::move(replacement));
}

}  // namespace symncd
