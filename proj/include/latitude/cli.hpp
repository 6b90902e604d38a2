#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latitude {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

/// Subcommands: factorize, synth, eval, bench. args excludes the program
/// name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace latitude
