#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "zkstrip/config.hpp"

namespace zk {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitValidation = 2, kExitBlowup = 3, kExitBound = 4 };

struct CommandOptions {
  std::optional<std::string> output_dir;
  std::optional<SnapshotFormat> snapshot_format;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void apply_options(RunSpec& spec, const CommandOptions& opts);

/// Each command writes its artifacts under spec.output.dir with the prefix
/// spec.output.prefix and returns an ExitCode.
int run_command(const RunSpec& spec, std::ostream& log);
int scenario_command(const RunSpec& spec, std::ostream& log);
int sweep_command(const RunSpec& spec, std::ostream& log);

/// Quick invariant self-tests; one line per check unless quiet.
int check_command(std::ostream& log, bool quiet);

}  // namespace zk
