#pragma once

#include <string>
#include <vector>

namespace pdg {

/// Entry point behind the pdg executable, callable from tests. args holds
/// everything after the program name. Returns the process exit code:
/// 0 success, 1 usage or configuration error, 2 data error, 3 numeric
/// failure. Never throws.
int run_cli(const std::vector<std::string>& args);

} // namespace pdg
