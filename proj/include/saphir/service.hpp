#pragma once

// HTTP facade over a Repository, independent of the transport. The HTTP
// adapter in http_server.hpp only converts requests and responses.
//
// Access levels:
//   learner content     open, no credentials; quiz solutions scrubbed
//   pedagogical support `X-Teacher-Mode: true` or any valid token
//   authoring, export   bearer token, role matrix enforced

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "saphir/store.hpp"
#include "saphir/users.hpp"

namespace saphir {

enum class Action {
  ReadLearnerContent,
  ReadPedagogicalSupport,
  ReadAuthoring,
  WriteSource,
  WriteVariant,
  WriteAsset,
  AddLanguage,
  ManageUsers,
  ExportPack,
  ReadReports,
};

inline constexpr Action kAllActions[] = {
    Action::ReadLearnerContent, Action::ReadPedagogicalSupport, Action::ReadAuthoring,
    Action::WriteSource,        Action::WriteVariant,           Action::WriteAsset,
    Action::AddLanguage,        Action::ManageUsers,            Action::ExportPack,
    Action::ReadReports,
};

std::string_view to_string(Action action) noexcept;

/// The role matrix. `locale` is the target of a WriteVariant; translators
/// may only write their granted locales. `user` is empty for anonymous calls.
bool is_allowed(Action action, const std::optional<Credentials>& user, bool teacher_mode,
                const std::string& locale = {});

/// HMAC-SHA256 signed bearer tokens carrying login, role, grants and expiry.
class TokenSigner {
public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  TokenSigner(std::string secret, std::chrono::seconds ttl, Clock clock);

  std::string issue(const Credentials& user) const;
  /// Empty for malformed, forged or expired tokens.
  std::optional<Credentials> verify(std::string_view token) const;

private:
  std::string key_;  // SHA-256 of the secret
  std::chrono::seconds ttl_;
  Clock clock_;
};

/// Every `error.code` a response can carry.
inline constexpr std::string_view kApiErrorCodes[] = {
    "BAD_REQUEST",           "UNAUTHENTICATED",    "FORBIDDEN",
    "TEACHER_MODE_REQUIRED", "NOT_FOUND",          "METHOD_NOT_ALLOWED",
    "DUPLICATE_LANGUAGE",    "DUPLICATE_LOGIN",    "VALIDATION_FAILED",
    "NO_QUIZ",               "EMPTY_POOL",         "UNRESOLVED_LINK",
    "UNKNOWN_QUESTION",      "UNKNOWN_PROPOSITION", "UNKNOWN_CATEGORY",
    "UNKNOWN_CARD",          "SAME_CARD",          "MODE_NOT_ENABLED",
    "MALFORMED_LANGUAGE_CODE", "UNKNOWN_LOCALE",   "UNKNOWN_SOURCE_RESOURCE",
    "WEAK_PASSWORD",         "INVALID_GRANTS",     "VERSION_MISMATCH",
    "INTERNAL_ERROR",
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceOptions {
  std::string token_secret;
  std::chrono::seconds token_ttl{86400};
  TokenSigner::Clock clock = [] { return std::chrono::system_clock::now(); };
  /// Seed for quiz sessions and decks when the request carries none.
  std::function<std::uint64_t()> seed_source;
};

class Service {
public:
  Service(Repository& repo, ServiceOptions options);

  /// Never throws; failures become JSON error bodies
  /// {"error": {"code", "message", "report"?}}.
  ApiResponse handle(const ApiRequest& request) const;

  const TokenSigner& tokens() const noexcept { return tokens_; }

private:
  Repository& repo_;
  ServiceOptions options_;
  TokenSigner tokens_;
};

}  // namespace saphir
