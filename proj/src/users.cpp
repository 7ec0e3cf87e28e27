#include "saphir/users.hpp"

#include <sodium.h>

#include "saphir/error.hpp"

namespace saphir {

namespace {

void require_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error(ErrorCode::IoError, "libsodium failed to initialize");
}

// Stand-in for unknown logins while the registry is empty.
const std::string& decoy_hash() {
  static const std::string hash = hash_password("decoy-password", PasswordCost::Minimum);
  return hash;
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Admin: return "admin";
    case Role::Designer: return "designer";
    case Role::Translator: return "translator";
  }
  return "";
}

std::optional<Role> parse_role(std::string_view text) {
  for (auto role : {Role::Admin, Role::Designer, Role::Translator}) {
    if (to_string(role) == text) return role;
  }
  return std::nullopt;
}

std::string hash_password(std::string_view password, PasswordCost cost) {
  require_sodium();
  const auto ops = cost == PasswordCost::Minimum ? crypto_pwhash_OPSLIMIT_MIN
                                                 : crypto_pwhash_OPSLIMIT_INTERACTIVE;
  const auto mem = cost == PasswordCost::Minimum ? crypto_pwhash_MEMLIMIT_MIN
                                                 : crypto_pwhash_MEMLIMIT_INTERACTIVE;
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, password.data(), password.size(), ops, mem,
                            crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::IoError, "password hashing ran out of memory");
  }
  return out;
}

bool verify_password(const std::string& hash, std::string_view password) {
  require_sodium();
  return crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
}

const UserRecord& UserRegistry::create(const std::string& login, std::string_view password,
                                       Role role, std::set<std::string> locale_grants,
                                       const LanguageRegistry& languages, PasswordCost cost) {
  if (is_blank(login)) throw Error(ErrorCode::InvalidArgument, "login is blank");
  if (users_.count(login)) throw Error(ErrorCode::DuplicateLogin, "login '" + login + "' is taken");
  if (password.size() < kMinPasswordLength) {
    throw Error(ErrorCode::WeakPassword, "password must have at least 8 characters");
  }
  if (role == Role::Translator && locale_grants.empty()) {
    throw Error(ErrorCode::InvalidGrants, "translators need at least one granted locale");
  }
  if (role != Role::Translator && !locale_grants.empty()) {
    throw Error(ErrorCode::InvalidGrants, "only translators carry locale grants");
  }
  for (const auto& code : locale_grants) {
    if (!languages.contains(code)) {
      throw Error(ErrorCode::UnknownLocale, "language '" + code + "' is not registered");
    }
  }
  UserRecord record{login, hash_password(password, cost), role, std::move(locale_grants)};
  return users_.emplace(login, std::move(record)).first->second;
}

std::optional<Credentials> UserRegistry::verify(const std::string& login,
                                                std::string_view password) const {
  auto it = users_.find(login);
  if (it == users_.end()) {
    // Same work as a real mismatch; the result is discarded.
    verify_password(users_.empty() ? decoy_hash() : users_.begin()->second.password_hash, password);
    return std::nullopt;
  }
  if (!verify_password(it->second.password_hash, password)) return std::nullopt;
  return Credentials{it->second.login, it->second.role, it->second.locale_grants};
}

const UserRecord* UserRegistry::find(std::string_view login) const {
  auto it = users_.find(std::string(login));
  return it == users_.end() ? nullptr : &it->second;
}

Json UserRegistry::to_json() const {
  Json out = Json::array();
  for (const auto& [login, user] : users_) {
    out.push_back({{"login", user.login},
                   {"password_hash", user.password_hash},
                   {"role", std::string(saphir::to_string(user.role))},
                   {"locale_grants", user.locale_grants}});
  }
  return out;
}

UserRegistry UserRegistry::from_json(const Json& json) {
  if (!json.is_array()) throw Error(ErrorCode::ParseError, "users: expected array");
  UserRegistry registry;
  for (std::size_t i = 0; i < json.size(); ++i) {
    ObjectReader r(json[i], "users[" + std::to_string(i) + "]");
    UserRecord user;
    user.login = r.string("login");
    user.password_hash = r.string("password_hash");
    const auto role_name = r.string("role");
    const auto role = parse_role(role_name);
    if (!role) throw Error(ErrorCode::ParseError, r.where("role") + ": unknown role '" + role_name + "'");
    user.role = *role;
    for (auto& code : r.string_array("locale_grants")) user.locale_grants.insert(std::move(code));
    r.finish();
    registry.users_.emplace(user.login, std::move(user));
  }
  return registry;
}

}  // namespace saphir
