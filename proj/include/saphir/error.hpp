#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saphir {

enum class ErrorCode {
  InvalidArgument,
  UnresolvedLink,
  EmptyQuiz,
  EmptyPool,
  UnknownQuestion,
  UnknownProposition,
  UnknownCategory,
  UnknownCard,
  SameCard,
  ModeNotEnabled,
  DuplicateLanguage,
  MalformedLanguageCode,
  UnknownLocale,
  UnknownSourceResource,
  UnknownResource,
  UnknownModule,
  ValidationFailure,
  IoError,
  CorruptRepository,
  RepositoryLocked,
  ParseError,
  VersionMismatch,
  DuplicateLogin,
  WeakPassword,
  InvalidGrants,
  UnknownUser,
  UnknownAsset,
};

/// Stable snake-case identifier used in CLI diagnostics and API error bodies.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace saphir
