#pragma once

#include <string>
#include <vector>

namespace vsg {

/// CLI entry point: parses `vsg-doa <subcommand> --config <path> ...` and
/// executes it. Returns the process exit status: 0 on success, 1 for
/// configuration or usage errors, 2 for analysis errors.
int run(const std::vector<std::string>& args);

}  // namespace vsg
