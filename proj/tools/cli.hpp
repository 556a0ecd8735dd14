#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phinull::cli {

/// Exit codes of the command-line front end.
enum Exit : int {
  kPass = 0,
  kConditionFail = 1,
  kValidationError = 2,
  kIoError = 3,
  kSentinel = 4,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phinull::cli
