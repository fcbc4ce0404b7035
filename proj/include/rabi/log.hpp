#pragma once

#include <string>

namespace rabi {

// Verbosity is taken from the RABI_LOG environment variable: error, info (default), debug.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();
void log(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log(LogLevel::Error, m); }
inline void log_info(const std::string& m) { log(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log(LogLevel::Debug, m); }

} // namespace rabi
