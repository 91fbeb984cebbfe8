#include "codevo/error.hpp"

namespace codevo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PathMissing: return "PathMissing";
    case ErrorCode::NotARepository: return "NotARepository";
    case ErrorCode::CloneFailed: return "CloneFailed";
    case ErrorCode::EmptyRepository: return "EmptyRepository";
    case ErrorCode::UnknownCommit: return "UnknownCommit";
    case ErrorCode::GitFailure: return "GitFailure";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::DuplicateMetricName: return "DuplicateMetricName";
    case ErrorCode::UnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace codevo
