#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vga::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitNumerical = 1,
  kExitValidation = 2,
  kExitRejected = 3,
};

/// Entry point of the `vga` executable. `serve` blocks until the server stops.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vga::tools
