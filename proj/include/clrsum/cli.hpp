#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clrsum::cli {

/// Runs the command line `args` (without the program name). Diagnostics go
/// to `err`, progress and summaries to `out`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clrsum::cli
