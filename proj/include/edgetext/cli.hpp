#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgetext {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitInternal = 3,
};

// Subcommands: encode, decode, fit-report, eval, loss, render, synth.
// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgetext
