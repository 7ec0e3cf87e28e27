#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "saphir/catalog.hpp"
#include "saphir/serialization.hpp"

namespace saphir {

enum class Role { Admin, Designer, Translator };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text);

/// Argon2id work factor. Minimum exists for test suites.
enum class PasswordCost { Interactive, Minimum };

inline constexpr std::size_t kMinPasswordLength = 8;

/// Salted Argon2id string (self-describing, includes its parameters).
std::string hash_password(std::string_view password, PasswordCost cost);
/// Constant-time with respect to the password.
bool verify_password(const std::string& hash, std::string_view password);

struct UserRecord {
  std::string login;
  std::string password_hash;
  Role role = Role::Designer;
  std::set<std::string> locale_grants;  // Translators only

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct Credentials {
  std::string login;
  Role role = Role::Designer;
  std::set<std::string> locale_grants;

  friend bool operator==(const Credentials&, const Credentials&) = default;
};

class UserRegistry {
public:
  /// Throws DuplicateLogin, WeakPassword, InvalidGrants (translator without
  /// grants, grants on another role) or UnknownLocale.
  const UserRecord& create(const std::string& login, std::string_view password, Role role,
                           std::set<std::string> locale_grants, const LanguageRegistry& languages,
                           PasswordCost cost);

  /// Role and grants on a match. Unknown logins cost the same as a mismatch.
  std::optional<Credentials> verify(const std::string& login, std::string_view password) const;

  const UserRecord* find(std::string_view login) const;
  const std::map<std::string, UserRecord>& all() const noexcept { return users_; }

  Json to_json() const;
  static UserRegistry from_json(const Json& json);

private:
  std::map<std::string, UserRecord> users_;
};

}  // namespace saphir
