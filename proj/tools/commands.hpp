#pragma once

#include "foliation/config.hpp"

#include <ostream>

namespace lab {

// Runs cfg.subcommand and writes its output. Returns the process exit status.
int run_command(const foliation::RunConfig& cfg, std::ostream& out);

}  // namespace lab
