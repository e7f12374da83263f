#pragma once

#include <string>
#include <vector>

namespace lpplab::cli {

// Parses and runs one subcommand invocation; argv-style arguments without the
// program name. Returns the process exit code: 0 success, 1 runtime failure,
// 2 usage error.
int run_command(const std::vector<std::string>& args);

}  // namespace lpplab::cli
