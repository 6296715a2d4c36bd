#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vf::cli {

enum ExitCode : int {
  kOk = 0,
  kViolations = 1,
  kInputError = 2,
  kNotConverged = 3,
};

/// Runs one command. Reports go to `out` (or --output), errors to `err` as a
/// single JSON line {"error": <code>, "message": <text>}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace vf::cli
