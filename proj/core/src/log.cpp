#include "firerisk/log.hpp"

#include <iostream>
#include <mutex>

namespace firerisk::log {

namespace {

const char* tag(Level level) {
  switch (level) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
  }
  return "?";
}

struct State {
  std::mutex mu;
  Level min_level = Level::Info;
  Sink sink = [](Level level, std::string_view m) { std::cerr << "[" << tag(level) << "] " << m << '\n'; };
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(state().mu);
  std::swap(state().sink, sink);
  return sink;
}

void set_min_level(Level level) {
  std::lock_guard lock(state().mu);
  state().min_level = level;
}

void write(Level level, std::string_view message) {
  std::lock_guard lock(state().mu);
  if (level < state().min_level || !state().sink) return;
  state().sink(level, message);
}

}  // namespace firerisk::log
