#pragma once

// Batch front end: argument vector in, exit code and report text out.

#include <string>
#include <vector>

namespace spectre {

enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

struct CliResult {
  int code = kExitOk;
  std::string out;
  std::string err;
};

// args excludes the program name.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace spectre
