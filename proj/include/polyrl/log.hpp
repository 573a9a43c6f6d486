#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace polyrl {

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity comes from POLYRL_LOG (error|warn|info|debug or 0..3); default warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("POLYRL_LOG");
    if (!env) return LogLevel::Warn;
    if (!std::strcmp(env, "error") || !std::strcmp(env, "0")) return LogLevel::Error;
    if (!std::strcmp(env, "warn") || !std::strcmp(env, "1")) return LogLevel::Warn;
    if (!std::strcmp(env, "info") || !std::strcmp(env, "2")) return LogLevel::Info;
    if (!std::strcmp(env, "debug") || !std::strcmp(env, "3")) return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

template <typename... Args>
void log(LogLevel level, const char* fmt, Args... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[polyrl:%s] ", names[static_cast<int>(level)]);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

inline void log(LogLevel level, const char* msg) { log(level, "%s", msg); }

}  // namespace polyrl
