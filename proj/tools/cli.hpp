#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acunh::cli {

enum ExitCode { ok = 0, negative = 1, error = 2, bound = 3 };

/// Runs the command line `args` (without the program name). Problem text is
/// read from the named file, from `in` for "-", or from --expr.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace acunh::cli
