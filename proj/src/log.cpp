#include "embedkit/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace embedkit {
namespace {

LogLevel g_level = LogLevel::kInfo;
std::once_flag g_env_once;
std::mutex g_mutex;

void init_from_env() {
  const char* v = std::getenv("EMBEDKIT_LOG");
  if (v == nullptr) return;
  if (std::strcmp(v, "quiet") == 0) {
    g_level = LogLevel::kQuiet;
  } else if (std::strcmp(v, "info") == 0) {
    g_level = LogLevel::kInfo;
  } else if (std::strcmp(v, "debug") == 0) {
    g_level = LogLevel::kDebug;
  } else {
    std::fprintf(stderr, "[warn] unknown EMBEDKIT_LOG value '%s', using info\n",
                 v);
  }
}

void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

}  // namespace

LogLevel log_level() {
  std::call_once(g_env_once, init_from_env);
  return g_level;
}

void set_log_level(LogLevel level) {
  std::call_once(g_env_once, init_from_env);
  g_level = level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) emit("info", msg);
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) emit("debug", msg);
}

void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) emit("warn", msg);
}

}  // namespace embedkit
