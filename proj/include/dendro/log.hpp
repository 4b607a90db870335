#pragma once

#include <string>

namespace dendro {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Current log level. Defaults to warn; the DENDRO_LOG environment variable
/// (error|warn|info|debug, or 0-3) takes precedence over everything else.
LogLevel log_level();

/// Sets the level programmatically. A DENDRO_LOG override still wins.
void set_log_level(LogLevel level);

/// Parses a level name ("warn", "2", ...). Throws InvalidInputError on junk.
LogLevel parse_log_level(const std::string& text);

void log_message(LogLevel level, const std::string& msg);

inline void log_error(const std::string& m) { log_message(LogLevel::kError, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::kWarn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::kInfo, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::kDebug, m); }

}  // namespace dendro
