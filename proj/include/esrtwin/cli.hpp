#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esrtwin::cli {

enum ExitCode : int { ok = 0, config_error = 1, runtime_error = 2 };

/// Run the command line given without the program name, e.g.
/// {"sweep", "--preset", "paper-fig3a", "--out", "run1"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esrtwin::cli
