#pragma once

#include <functional>
#include <string>

namespace catq {

// Warnings are routed through a process-wide sink (stderr by default).
using LogSink = std::function<void(const std::string&)>;

void set_log_sink(LogSink sink);
void warn(const std::string& msg);

}  // namespace catq
