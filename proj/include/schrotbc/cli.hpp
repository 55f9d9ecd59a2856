#pragma once

namespace schrotbc {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitInstability = 3,
};

/// Entry point of the `schrotbc` tool: subcommands run, sweep and presets.
int cli_main(int argc, const char* const* argv);

}  // namespace schrotbc
