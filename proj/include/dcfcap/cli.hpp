#pragma once

#include <string>
#include <vector>

namespace dcfcap {

/// Full command-line front end. Returns the process exit code:
/// 0 success, 1 usage/config error, 2 solver failure, 3 I/O failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace dcfcap
