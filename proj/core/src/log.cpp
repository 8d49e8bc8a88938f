#include "shotlab/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace shotlab::log {
namespace {

std::atomic<Level> g_level{Level::Warning};
std::mutex g_mutex;

void emit(Level lvl, const char* tag, std::string_view message) {
  if (lvl < g_level.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_mutex);
  std::fprintf(stderr, "[%s] %.*s\n", tag, static_cast<int>(message.size()), message.data());
}

}  // namespace

void set_level(Level lvl) noexcept { g_level.store(lvl, std::memory_order_relaxed); }
Level level() noexcept { return g_level.load(std::memory_order_relaxed); }

void debug(std::string_view m) { emit(Level::Debug, "debug", m); }
void info(std::string_view m) { emit(Level::Info, "info", m); }
void warn(std::string_view m) { emit(Level::Warning, "warn", m); }
void error(std::string_view m) { emit(Level::Error, "error", m); }

}  // namespace shotlab::log
