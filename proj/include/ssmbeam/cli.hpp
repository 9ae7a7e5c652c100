#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssmbeam {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitValidation = 2,
  kExitResonance = 3,
  kExitNumerical = 4,
};

/// Entry point of `ssm-beam`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssmbeam
