#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace symncd {

/// Library-wide logger. Warnings about clamping, degenerate extrema and
/// few-shot shortfalls go through here. Defaults to a stderr sink.
std::shared_ptr<spdlog::logger> logger();

/// Replace the library logger (tests attach an ostream sink to inspect warnings).
void set_logger(std::shared_ptr<spdlog::logger> replacement);

}  // namespace symncd
