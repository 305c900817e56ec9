#pragma once

#include <string_view>

namespace qsurr::log {

enum class Level { Debug, Info, Warn, Error };

/// Emit structured JSON lines instead of plain text (stderr either way).
void set_json(bool enabled);
void set_min_level(Level level);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::Debug, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void error(std::string_view m) { write(Level::Error, m); }

}  // namespace qsurr::log
