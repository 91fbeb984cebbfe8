#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "codevo/cst_parser.hpp"

namespace codevo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisFailure = 1;
inline constexpr int kExitUsage = 2;

struct CliArgs {
  Language report_type = Language::Python;
  std::string repo;
  bool monthly = false;
  std::optional<int> from_year;
  std::optional<int> to_year;
  std::filesystem::path output = ".";
  bool csv_only = false;
  bool html_only = false;
  bool verbose = false;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> chart_asset;
  std::optional<std::filesystem::path> workspace;
};

/// Returned instead of CliArgs when parsing ends the program (usage error or
/// --help); `message` goes to stderr (errors) or stdout (help).
struct CliExit {
  int code = kExitUsage;
  std::string message;
};

/// `argv` excludes the program name.
std::variant<CliArgs, CliExit> parse_args(const std::vector<std::string>& argv);

/// Resolves, analyzes and writes reports. Report paths go to `out`, progress
/// and warnings (one "warning: " line per skipped entry) to `err`.
int run(const CliArgs& args, std::ostream& out, std::ostream& err);

/// parse_args + run, mapping every outcome onto the 0/1/2 exit contract.
int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace codevo::cli
