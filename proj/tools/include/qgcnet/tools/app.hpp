#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qgc::tools {

/// Runs `qgcnet <args...>`. On success prints one JSON status line to `out`
/// and returns 0; on failure prints {"error": {"code", "message"}} to `err`
/// and returns 2 for configuration errors, 1 otherwise. No files are left
/// behind by a failed run.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgc::tools
