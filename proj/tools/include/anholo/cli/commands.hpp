#pragma once

#include <string>

#include "anholo/cli/config.hpp"

namespace anholo::cli {

struct CommandResult {
  /// Main artifact: CSV for spectrum and gap-scan, JSON otherwise.
  std::string primary;
  /// JSON summary written next to the CSV (spectrum only).
  std::string summary;
};

CommandResult run_spectrum(const Json& config, int threads);
CommandResult run_passage_cmd(const Json& config, int threads);
CommandResult run_gap_scan(const Json& config, int threads);
CommandResult run_clock_demo(const Json& config, int threads);
CommandResult run_discretize(const Json& config, int threads);

/// Dispatches on the command name; `config` must already be resolved.
CommandResult run_command(const std::string& command, const Json& config, int threads);

}  // namespace anholo::cli
