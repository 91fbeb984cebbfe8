#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace codevo::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;

  bool ok() const { return exit_code == 0; }
};

// Runs argv[0] (looked up on PATH) without a shell. `input` is written to the
// child's stdin; stdout and stderr are captured in full.
ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd = {},
                          const std::string& input = {});

}  // namespace codevo::detail
