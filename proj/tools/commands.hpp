#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phaselab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitGate = 2;
inline constexpr int kExitInput = 3;

/// Runs the command line `args` (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// PHASELAB_TOL_SCALE, default 1; non-positive or malformed values are input errors.
double tolerance_scale();

}  // namespace phaselab::cli
