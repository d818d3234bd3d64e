#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causalinfo::cli {

enum ExitCode : int { kOk = 0, kDomain = 1, kUsage = 2, kHuntEmpty = 3 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Bits as fixed-point text with 12 digits after the point.
std::string format_bits(double bits);

}  // namespace causalinfo::cli
