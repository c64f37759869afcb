#pragma once

#include <string>

namespace biotfv {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level read from BIOTFV_LOG (error|warn|info|debug), default warn.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_message(LogLevel level, const std::string& msg);

}  // namespace biotfv

#define BIOTFV_LOG_WARN(msg) ::biotfv::log_message(::biotfv::LogLevel::Warn, (msg))
#define BIOTFV_LOG_INFO(msg) ::biotfv::log_message(::biotfv::LogLevel::Info, (msg))
#define BIOTFV_LOG_DEBUG(msg) ::biotfv::log_message(::biotfv::LogLevel::Debug, (msg))
