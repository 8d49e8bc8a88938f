#pragma once

#include <string_view>

namespace shotlab::log {

enum class Level { Debug = 0, Info = 1, Warning = 2, Error = 3, Silent = 4 };

void set_level(Level level) noexcept;
Level level() noexcept;

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);
void error(std::string_view message);

}  // namespace shotlab::log
