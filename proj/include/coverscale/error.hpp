#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coverscale {

enum class ErrorCode {
  // configuration / usage
  ConfigError,
  InvalidArgument,
  InvalidK,
  // ingestion
  MissingField,
  DuplicateId,
  Malformed,
  OrphanTrackLine,
  EmptyFile,
  NoVocabulary,
  IndexOutOfRange,
  BadCount,
  InfeasibleParams,
  BadHeader,
  NegativeDistance,
  IoError,
  // index / retrieval / fusion / eval
  EmptyCollection,
  EmptyQuery,
  NoLyrics,
  QueryMismatch,
  EmptyRelevantSet,
  NoQueries,
  UnknownQuery,
  BadSnapshot,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::OrphanTrackLine: return "OrphanTrackLine";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::NoVocabulary: return "NoVocabulary";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadCount: return "BadCount";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::NoLyrics: return "NoLyrics";
    case ErrorCode::QueryMismatch: return "QueryMismatch";
    case ErrorCode::EmptyRelevantSet: return "EmptyRelevantSet";
    case ErrorCode::NoQueries: return "NoQueries";
    case ErrorCode::UnknownQuery: return "UnknownQuery";
    case ErrorCode::BadSnapshot: return "BadSnapshot";
  }
  return "Unknown";
}

/// Configuration and usage errors map to CLI exit code 1, everything else
/// (bad input data) to exit code 2.
constexpr bool is_config_error(ErrorCode code) noexcept {
  return code == ErrorCode::ConfigError || code == ErrorCode::InvalidArgument ||
         code == ErrorCode::InvalidK;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(format(code, message, line)), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }

  /// 1-based input line the error refers to, 0 when not line-oriented.
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(ErrorCode code, const std::string& message, std::size_t line) {
    std::string out(to_string(code));
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::size_t line_;
};

}  // namespace coverscale
