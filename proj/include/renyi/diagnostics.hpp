#pragma once

#include <string_view>

namespace renyi {

// Non-fatal numerical warnings (tail truncation, clamped transport queries).
// Printed to stderr unless disabled; a counter is kept for tests.
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
[[nodiscard]] unsigned long warning_count();

} // namespace renyi
