#pragma once

#include "config.hpp"

#include <string>

namespace catq::cli {

// Each command writes its files under cfg.out_dir and returns the exit code.
int cmd_spectrum(const RunConfig& cfg, const std::string& command_line);
int cmd_quench(const RunConfig& cfg, const std::string& command_line);
int cmd_wigner(const RunConfig& cfg, const std::string& command_line);
int cmd_scan(const RunConfig& cfg, const std::string& command_line);
int cmd_second_quench(const RunConfig& cfg, const std::string& command_line);

}  // namespace catq::cli
