#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace codevo {

enum class ErrorCode {
  PathMissing,
  NotARepository,
  CloneFailed,
  EmptyRepository,
  UnknownCommit,
  GitFailure,
  NoSamples,
  DuplicateMetricName,
  UnsupportedLanguage,
  InvalidArgument,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` lets callers map
// them onto exit codes or per-repo warnings.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace codevo
