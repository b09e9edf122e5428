#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deformtrack::cli {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitStage = 3, kExitInternal = 4 };

/// Runs the command line `args` (program name first). Diagnostics go to
/// `err`, summaries to `out`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deformtrack::cli
