#ifndef GLSHP_LOG_HPP
#define GLSHP_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <string>

namespace glshp::log {

enum class Level { error = 0, info = 1, debug = 2 };

inline Level threshold() {
  static Level lvl = [] {
    const char* env = std::getenv("GLSHP_LOG");
    if (!env) return Level::error;
    std::string v(env);
    if (v == "debug") return Level::debug;
    if (v == "info") return Level::info;
    return Level::error;
  }();
  return lvl;
}

inline void write(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(threshold())) return;
  const char* tag = lvl == Level::error ? "error"
                    : lvl == Level::info ? "info"
                                         : "debug";
  std::cerr << "glshp [" << tag << "] " << msg << "\n";
}

inline void error(const std::string& msg) { write(Level::error, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }
inline void debug(const std::string& msg) { write(Level::debug, msg); }

}  // namespace glshp::log

#endif  // GLSHP_LOG_HPP
