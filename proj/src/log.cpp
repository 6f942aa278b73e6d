#include "vitalband/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#include "vitalband/text.hpp"

namespace vitalband {

namespace {

std::atomic<int> g_level{-1}; // -1 = read VITALBAND_LOG lazily
std::mutex g_mutex;

int level_from_env() {
    const char* env = std::getenv("VITALBAND_LOG");
    if (!env) return static_cast<int>(LogLevel::warn);
    const std::string value = to_lower(env);
    if (value == "error") return static_cast<int>(LogLevel::error);
    if (value == "warn" || value == "warning") return static_cast<int>(LogLevel::warn);
    if (value == "info") return static_cast<int>(LogLevel::info);
    if (value == "debug") return static_cast<int>(LogLevel::debug);
    return static_cast<int>(LogLevel::warn);
}

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warning";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "info";
}

} // namespace

LogLevel log_level() {
    int level = g_level.load(std::memory_order_relaxed);
    if (level < 0) {
        level = level_from_env();
        g_level.store(level, std::memory_order_relaxed);
    }
    return static_cast<LogLevel>(level);
}

void set_log_level(LogLevel level) {
    g_level.store(static_cast<int>(level), std::memory_order_relaxed);
}

void log(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << level_tag(level) << "] " << message << "\n";
}

} // namespace vitalband
