#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sigdet {

enum ExitCode : int {
  kExitPass = 0,
  kExitStatisticalFailure = 1,
  kExitConfigError = 2,
  kExitConstantTooSmall = 3,
};

/// Entry point of the `sigdet` tool. `args` excludes the program name.
/// Payloads go to `out` (or to --out, with a text summary on `out`);
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sigdet
