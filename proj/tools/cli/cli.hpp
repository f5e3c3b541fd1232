#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rectiscan::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
};

/// Runs one command line (without the program name). Diagnostics go to err,
/// help and short summaries to out. Output files are written only after the
/// computation succeeds; if writing fails the files already written are
/// removed again.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rectiscan::cli
