#include "catq/log.hpp"

#include <iostream>
#include <mutex>

namespace catq {
namespace {

std::mutex g_sink_mutex;
LogSink g_sink;

}  // namespace

void set_log_sink(LogSink sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& msg) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(msg);
    } else {
        std::cerr << "catq warning: " << msg << '\n';
    }
}

}  // namespace catq
