#pragma once

#include <iostream>
#include <string>

namespace extsum {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel& log_level() {
  static LogLevel level = LogLevel::Warn;
  return level;
}

inline bool parse_log_level(const std::string& name, LogLevel& out) {
  if (name == "error") { out = LogLevel::Error; return true; }
  if (name == "warn")  { out = LogLevel::Warn;  return true; }
  if (name == "info")  { out = LogLevel::Info;  return true; }
  if (name == "debug") { out = LogLevel::Debug; return true; }
  return false;
}

inline void log_at(LogLevel level, const std::string& msg) {
  static const char* tag[] = {"error", "warn", "info", "debug"};
  if (level <= log_level())
    std::cerr << "[" << tag[static_cast<int>(level)] << "] " << msg << "\n";
}

inline void log_error(const std::string& msg) { log_at(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg)  { log_at(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg)  { log_at(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_at(LogLevel::Debug, msg); }

}  // namespace extsum
