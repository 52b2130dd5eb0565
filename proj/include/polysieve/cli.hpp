#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polysieve::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,  // schema, usage and input errors
  kNumeric = 3,
};

/// Entry point behind the `polysieve` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from --threads, else POLYSIEVE_THREADS, else the hardware.
int resolve_threads(int flag_value);

}  // namespace polysieve::cli
