#include "rabi/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace rabi {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("RABI_LOG");
        if (env == nullptr) return LogLevel::Info;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log(LogLevel level, const std::string& message) {
    if (level > log_level()) return;
    const char* tag = level == LogLevel::Error ? "error"
                    : level == LogLevel::Info  ? "info"
                                               : "debug";
    std::fprintf(stderr, "[rabi:%s] %s\n", tag, message.c_str());
}

} // namespace rabi
