#include "biotfv/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace biotfv {

namespace {

LogLevel g_level = [] {
  const char* env = std::getenv("BIOTFV_LOG");
  if (!env) return LogLevel::Warn;
  const std::string s(env);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}();

std::mutex g_mutex;

const char* tag(LogLevel l) {
  switch (l) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    default: return "debug";
  }
}

}  // namespace

LogLevel log_level() { return g_level; }
void set_log_level(LogLevel level) { g_level = level; }

void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(g_level)) return;
  std::scoped_lock lock(g_mutex);
  std::cerr << "[biotfv " << tag(level) << "] " << msg << "\n";
}

}  // namespace biotfv
