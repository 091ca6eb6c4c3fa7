#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace allmod::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDomain = 2, kCalibrationRequired = 3 };

/// Runs the command line; args[0] is the program name. Normal output goes to
/// `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace allmod::cli
