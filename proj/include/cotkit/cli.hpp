#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cotkit {

/// Runs the command line `args` (args[0] is the program name). Results and
/// error summaries are JSON on `out` / `err`; log lines go to `err`.
/// Returns 0 on success, 2 on usage errors, 1 on any other failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string version_string();

}  // namespace cotkit
