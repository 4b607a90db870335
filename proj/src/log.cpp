#include "dendro/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>

#include "dendro/errors.hpp"

namespace dendro {

namespace {

// -1 marks "not initialised yet"; first query resolves the default.
std::atomic<int> g_level{-1};
std::atomic<bool> g_env_pinned{false};

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::kError: return "error";
        case LogLevel::kWarn: return "warn";
        case LogLevel::kInfo: return "info";
        case LogLevel::kDebug: return "debug";
    }
    return "?";
}

int resolve_initial_level() {
    if (const char* env = std::getenv("DENDRO_LOG")) {
        try {
            g_env_pinned.store(true, std::memory_order_relaxed);
            return static_cast<int>(parse_log_level(env));
        } catch (const Error&) {
            g_env_pinned.store(false, std::memory_order_relaxed);
            std::fprintf(stderr, "[warn] ignoring unrecognised DENDRO_LOG value '%s'\n", env);
        }
    }
    return static_cast<int>(LogLevel::kWarn);
}

}  // namespace

LogLevel parse_log_level(const std::string& text) {
    if (text == "error" || text == "0") return LogLevel::kError;
    if (text == "warn" || text == "warning" || text == "1") return LogLevel::kWarn;
    if (text == "info" || text == "2") return LogLevel::kInfo;
    if (text == "debug" || text == "3") return LogLevel::kDebug;
    throw InvalidInputError("unknown log level '" + text + "' (expected error|warn|info|debug)");
}

LogLevel log_level() {
    int level = g_level.load(std::memory_order_relaxed);
    if (level < 0) {
        level = resolve_initial_level();
        g_level.store(level, std::memory_order_relaxed);
    }
    return static_cast<LogLevel>(level);
}

void set_log_level(LogLevel level) {
    log_level();  // make sure the environment override is resolved first
    if (g_env_pinned.load(std::memory_order_relaxed)) return;
    g_level.store(static_cast<int>(level), std::memory_order_relaxed);
}

void log_message(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::fprintf(stderr, "[%s] %s\n", level_tag(level), msg.c_str());
}

}  // namespace dendro
