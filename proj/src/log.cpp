#include "qsurr/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <string>

#include <json.hpp>

namespace qsurr::log {

namespace {
std::atomic<bool> g_json{false};
std::atomic<Level> g_min{Level::Warn};
std::mutex g_mutex;

const char* name(Level l) {
  switch (l) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
  }
  return "?";
}
}  // namespace

void set_json(bool enabled) { g_json = enabled; }
void set_min_level(Level level) { g_min = level; }

void write(Level level, std::string_view message) {
  if (level < g_min.load()) return;
  std::lock_guard lock(g_mutex);
  if (g_json) {
    std::cerr << nlohmann::json{{"level", name(level)}, {"message", std::string(message)}}.dump()
              << '\n';
  } else {
    std::cerr << "[qsurr " << name(level) << "] " << message << '\n';
  }
}

}  // namespace qsurr::log
