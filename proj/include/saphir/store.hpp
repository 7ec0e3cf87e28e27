#pragma once

// File-backed content repository.
//
// Layout under the repository directory:
//
//   repository.json                         index: format version, module ids
//   languages.json                          language registry
//   modules/<id>/module.json                header and source revisions
//   modules/<id>/history.json               revision timestamps
//   modules/<id>/resources/<kind>.json      canonical source documents
//   variants/<id>/<locale>/<kind>.json      locale variants
//   assets/index.json, assets/<sha256>      binary assets by content hash
//   users.json                              logins with Argon2id hashes
//
// Readers share the in-memory state; every mutation runs under the writer
// lock, validates, writes the affected files atomically (temp file + rename)
// and only then publishes the new state. A writable handle also holds an
// exclusive advisory lock on the directory so at most one process writes.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "saphir/catalog.hpp"
#include "saphir/localization.hpp"
#include "saphir/pack.hpp"
#include "saphir/users.hpp"
#include "saphir/validation.hpp"

namespace saphir {

inline constexpr int kRepositoryFormatVersion = 1;

struct RepositoryOptions {
  bool read_only = false;
  PasswordCost password_cost = PasswordCost::Interactive;
  /// Clock for revision timestamps.
  std::function<std::chrono::system_clock::time_point()> clock = [] {
    return std::chrono::system_clock::now();
  };
};

struct Revision {
  ResourceKey resource;
  std::uint64_t revision_number = 0;
  std::string timestamp;  // ISO-8601 UTC
};

struct StoredResource {
  ResourceDocument document;
  std::uint64_t revision = 0;
};

class Repository {
public:
  /// Opens `dir`, creating an empty repository if it holds none.
  /// Throws IoError, CorruptRepository or RepositoryLocked.
  static std::unique_ptr<Repository> open(const std::filesystem::path& dir,
                                          RepositoryOptions options = {});

  /// Throws IoError if `dir` already holds a repository.
  static std::unique_ptr<Repository> init(const std::filesystem::path& dir,
                                          RepositoryOptions options = {});

  ~Repository();
  Repository(const Repository&) = delete;
  Repository& operator=(const Repository&) = delete;

  const std::filesystem::path& path() const noexcept { return dir_; }

  /// Runs `f` against the current state under the reader lock.
  template <typename F>
  auto read(F&& f) const {
    std::shared_lock lock(mutex_);
    return f(catalog_);
  }
  Catalog snapshot() const;

  // Languages
  void add_language(const std::string& code, const std::string& display_name);

  // Source documents. Writes are validated against the whole module and
  // refused with ValidationError; each write bumps the resource revision and
  // marks its variants Stale.
  void put_module(const ModuleDescriptor& module);
  void delete_module(const std::string& module_id);
  std::uint64_t put_resource(const std::string& module_id, const ResourceDocument& document);
  StoredResource get_resource(const std::string& module_id, ResourceKind kind) const;
  /// Removes the resource and its variants. A module's last resource cannot
  /// be removed; delete the module instead.
  void delete_resource(const std::string& module_id, ResourceKind kind);
  Revision revision(const std::string& module_id, ResourceKind kind) const;

  // Variants
  LocaleVariant upsert_variant(VariantInput input);
  std::vector<VariantKey> touch_source(const std::string& module_id, ResourceKind kind);

  // Assets
  std::string put_asset(const std::string& media_type, std::string bytes);
  std::optional<Asset> get_asset(const std::string& asset_id) const;

  // Packs and reports
  std::string export_pack(const std::optional<std::set<std::string>>& locales = std::nullopt) const;
  ImportReport import_pack(std::string_view bytes);
  PackStats stats() const;
  ValidationReport validate() const;
  CompletenessReport completeness() const;

  // Users
  void create_user(const std::string& login, std::string_view password, Role role,
                   std::set<std::string> locale_grants = {});
  std::optional<Credentials> verify_credentials(const std::string& login,
                                                std::string_view password) const;
  std::vector<Credentials> list_users() const;

private:
  Repository(std::filesystem::path dir, RepositoryOptions options);

  void load();
  void lock_directory();
  std::string now_iso() const;

  // Persistence of a new state. Callers hold the writer lock.
  void write_index(const Catalog& catalog) const;
  void write_languages(const Catalog& catalog) const;
  void write_module(const Catalog& catalog, const std::string& module_id) const;
  void write_variants(const Catalog& catalog, const std::string& module_id) const;
  void write_asset(const Asset& asset) const;
  void write_asset_index(const Catalog& catalog) const;
  void write_users() const;
  void write_history(const std::string& module_id) const;
  void write_all(const Catalog& catalog) const;

  void stamp(const ResourceKey& key, std::uint64_t revision);
  void require_writable() const;
  void check_assets(const Catalog& catalog, const ResourceDocument& document,
                    ValidationReport& report, const Path& at) const;

  std::filesystem::path dir_;
  RepositoryOptions options_;
  int lock_fd_ = -1;

  mutable std::shared_mutex mutex_;
  Catalog catalog_;
  UserRegistry users_;
  std::map<ResourceKey, Revision> history_;
};

}  // namespace saphir
