#pragma once

#include <string>
#include <vector>

namespace govgram {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
};

/// Runs argv[0] from PATH with the given arguments, capturing stdout.
/// stderr is discarded. Throws Error when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace govgram
