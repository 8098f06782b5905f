#pragma once

#include <string>

namespace embedkit {

// Verbosity is controlled by the EMBEDKIT_LOG environment variable
// (quiet | info | debug); default info. All logging goes to stderr so
// command output on stdout stays machine-readable.
enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level();
void set_log_level(LogLevel level);

void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace embedkit
