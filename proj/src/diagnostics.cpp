#include "renyi/diagnostics.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <string>

namespace renyi {

namespace {
std::atomic<bool> g_enabled{true};
std::atomic<unsigned long> g_count{0};
std::mutex g_mutex;
} // namespace

void warn(std::string_view message) {
    ++g_count;
    if (!g_enabled.load()) return;
    std::lock_guard lock(g_mutex);
    std::fprintf(stderr, "[renyi] warning: %.*s\n", static_cast<int>(message.size()), message.data());
}

void set_warnings_enabled(bool enabled) { g_enabled = enabled; }

unsigned long warning_count() { return g_count.load(); }

} // namespace renyi
