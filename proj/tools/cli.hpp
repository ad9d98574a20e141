#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autophage::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,  // a residual or certificate is outside tolerance
  kUsageError = 2,           // bad flags, malformed input, I/O failure
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace autophage::cli
