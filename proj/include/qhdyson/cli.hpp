#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qhdyson/errors.hpp"

namespace qhdyson::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotPassed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitComplexSpectrum = 3;
inline constexpr int kExitDefective = 4;
inline constexpr int kExitNumerical = 5;
inline constexpr int kExitModelRegion = 6;
inline constexpr int kExitNoSharedMetric = 7;
inline constexpr int kExitInconclusive = 8;

int exit_code_for(ErrorKind kind) noexcept;

/// Runs the command line `args` (args[0] is the program name). Reports and
/// CSV go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qhdyson::cli
