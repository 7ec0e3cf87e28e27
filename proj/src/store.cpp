#include "saphir/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "saphir/error.hpp"
#include "saphir/serialization.hpp"

namespace fs = std::filesystem;

namespace saphir {

namespace {

constexpr const char* kIndexFile = "repository.json";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

void remove_tree(const fs::path& path) {
  std::error_code ec;
  fs::remove_all(path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot remove " + path.string() + ": " + ec.message());
}

Json read_json(const fs::path& path) {
  try {
    return parse_json(read_file(path));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptRepository, path.filename().string() + ": " + e.what());
  }
}

std::string kind_file(ResourceKind kind) { return std::string(to_string(kind)) + ".json"; }

std::optional<ResourceKind> kind_from_file(const fs::path& file) {
  if (file.extension() != ".json") return std::nullopt;
  return parse_resource_kind(file.stem().string());
}

}  // namespace

std::unique_ptr<Repository> Repository::open(const fs::path& dir, RepositoryOptions options) {
  std::unique_ptr<Repository> repo(new Repository(dir, std::move(options)));
  if (!repo->options_.read_only) repo->lock_directory();
  repo->load();
  return repo;
}

std::unique_ptr<Repository> Repository::init(const fs::path& dir, RepositoryOptions options) {
  if (fs::exists(dir / kIndexFile)) {
    throw Error(ErrorCode::IoError, dir.string() + " already holds a repository");
  }
  options.read_only = false;
  return open(dir, std::move(options));
}

Repository::Repository(fs::path dir, RepositoryOptions options)
    : dir_(std::move(dir)), options_(std::move(options)) {}

Repository::~Repository() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Repository::lock_directory() {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
  const fs::path lock_path = dir_ / ".lock";
  lock_fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) throw Error(ErrorCode::IoError, "cannot open " + lock_path.string() + ": " + std::strerror(errno));
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw Error(ErrorCode::RepositoryLocked, dir_.string() + " is locked by another writer");
  }
}

void Repository::load() {
  if (!fs::exists(dir_ / kIndexFile)) {
    if (options_.read_only) throw Error(ErrorCode::IoError, "no repository at " + dir_.string());
    write_all(catalog_);
    write_users();
    return;
  }
  try {
    const Json index = read_json(dir_ / kIndexFile);
    ObjectReader r(index, "repository");
    if (r.integer("format_version") != kRepositoryFormatVersion) {
      throw Error(ErrorCode::CorruptRepository, "unsupported repository format_version");
    }
    const auto module_ids = r.string_array("modules");
    r.finish();

    Catalog catalog;
    catalog.languages = languages_from_json(read_json(dir_ / "languages.json"));
    users_ = UserRegistry::from_json(read_json(dir_ / "users.json"));

    const Json asset_index = read_json(dir_ / "assets" / "index.json");
    if (!asset_index.is_array()) throw Error(ErrorCode::ParseError, "assets index: expected array");
    for (const auto& entry : asset_index) {
      ObjectReader a(entry, "asset");
      Asset asset;
      asset.asset_id = a.string("asset_id");
      asset.media_type = a.string("media_type");
      a.integer("size");
      a.finish();
      asset.bytes = read_file(dir_ / "assets" / asset.asset_id);
      if (content_hash(asset.bytes) != asset.asset_id) {
        throw Error(ErrorCode::CorruptRepository, "asset " + asset.asset_id + " does not match its hash");
      }
      catalog.assets.emplace(asset.asset_id, std::move(asset));
    }

    for (const auto& id : module_ids) {
      const fs::path module_dir = dir_ / "modules" / id;
      ModuleDescriptor module;
      module_header_from_json(read_json(module_dir / "module.json"), module, catalog.revisions);
      if (module.module_id != id) throw Error(ErrorCode::CorruptRepository, "module id mismatch for " + id);
      for (const auto& file : fs::directory_iterator(module_dir / "resources")) {
        auto kind = kind_from_file(file.path());
        if (!kind) continue;
        module.resources.emplace(*kind, document_from_json(*kind, read_json(file.path())));
      }
      for (const auto& [key, revision] : catalog.revisions) {
        if (key.module_id == id && module.resources.count(key.kind) == 0) {
          throw Error(ErrorCode::CorruptRepository, "missing document " + key.str());
        }
      }

      const fs::path history_path = module_dir / "history.json";
      if (fs::exists(history_path)) {
        const Json history = read_json(history_path);
        ObjectReader h(history, "history");
        for (const auto& [kind, document] : module.resources) {
          const std::string name(to_string(kind));
          if (const Json* entry = h.optional(name.c_str())) {
            ObjectReader e(*entry, h.where(name));
            Revision revision{{id, kind}, static_cast<std::uint64_t>(e.integer("revision")), e.string("timestamp")};
            e.finish();
            history_[{id, kind}] = std::move(revision);
          }
        }
        h.finish();
      }

      const fs::path variant_dir = dir_ / "variants" / id;
      if (fs::exists(variant_dir)) {
        for (const auto& locale_dir : fs::directory_iterator(variant_dir)) {
          for (const auto& file : fs::directory_iterator(locale_dir.path())) {
            if (!kind_from_file(file.path())) continue;
            LocaleVariant variant = variant_from_json(read_json(file.path()));
            catalog.variants.emplace(variant.key(), std::move(variant));
          }
        }
      }
      catalog.modules.emplace(id, std::move(module));
    }
    catalog_ = std::move(catalog);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptRepository) throw;
    throw Error(ErrorCode::CorruptRepository, std::string("corrupt repository: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::CorruptRepository, std::string("corrupt repository: ") + e.what());
  }
}

std::string Repository::now_iso() const {
  const std::time_t t = std::chrono::system_clock::to_time_t(options_.clock());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void Repository::require_writable() const {
  if (options_.read_only) throw Error(ErrorCode::IoError, "repository opened read-only");
}

void Repository::stamp(const ResourceKey& key, std::uint64_t revision) {
  history_[key] = Revision{key, revision, now_iso()};
}

void Repository::write_index(const Catalog& catalog) const {
  Json modules = Json::array();
  for (const auto& [id, module] : catalog.modules) modules.push_back(id);
  write_file(dir_ / kIndexFile,
             canonical_dump({{"format_version", kRepositoryFormatVersion}, {"modules", modules}}));
}

void Repository::write_languages(const Catalog& catalog) const {
  write_file(dir_ / "languages.json", canonical_dump(languages_to_json(catalog.languages)));
}

void Repository::write_history(const std::string& module_id) const {
  Json out = Json::object();
  for (const auto& [key, revision] : history_) {
    if (key.module_id != module_id) continue;
    out[std::string(to_string(key.kind))] = {{"revision", revision.revision_number},
                                             {"timestamp", revision.timestamp}};
  }
  write_file(dir_ / "modules" / module_id / "history.json", canonical_dump(out));
}

void Repository::write_module(const Catalog& catalog, const std::string& module_id) const {
  const fs::path module_dir = dir_ / "modules" / module_id;
  const ModuleDescriptor& module = catalog.modules.at(module_id);
  fs::create_directories(module_dir / "resources");
  for (const auto& [kind, document] : module.resources) {
    write_file(module_dir / "resources" / kind_file(kind), canonical_serialize(document));
  }
  for (const auto& file : fs::directory_iterator(module_dir / "resources")) {
    auto kind = kind_from_file(file.path());
    if (!kind || module.resources.count(*kind) == 0) fs::remove(file.path());
  }
  write_file(module_dir / "module.json", canonical_dump(module_header_to_json(module, catalog)));
  write_history(module_id);
}

void Repository::write_variants(const Catalog& catalog, const std::string& module_id) const {
  const fs::path variant_dir = dir_ / "variants" / module_id;
  std::set<fs::path> expected;
  for (const auto& [key, variant] : catalog.variants) {
    if (key.module_id != module_id) continue;
    fs::path file = variant_dir / key.locale / kind_file(key.kind);
    write_file(file, canonical_dump(to_json(variant)));
    expected.insert(file);
  }
  if (!fs::exists(variant_dir)) return;
  for (const auto& locale_dir : fs::directory_iterator(variant_dir)) {
    for (const auto& file : fs::directory_iterator(locale_dir.path())) {
      if (expected.count(file.path()) == 0) fs::remove(file.path());
    }
    if (fs::is_empty(locale_dir.path())) fs::remove(locale_dir.path());
  }
}

void Repository::write_asset(const Asset& asset) const {
  const fs::path path = dir_ / "assets" / asset.asset_id;
  if (!fs::exists(path)) write_file(path, asset.bytes);
}

void Repository::write_asset_index(const Catalog& catalog) const {
  Json index = Json::array();
  for (const auto& [id, asset] : catalog.assets) {
    index.push_back({{"asset_id", id}, {"media_type", asset.media_type}, {"size", asset.bytes.size()}});
  }
  write_file(dir_ / "assets" / "index.json", canonical_dump(index));
}

void Repository::write_users() const {
  write_file(dir_ / "users.json", canonical_dump(users_.to_json()));
}

void Repository::write_all(const Catalog& catalog) const {
  write_languages(catalog);
  for (const auto& [id, asset] : catalog.assets) write_asset(asset);
  write_asset_index(catalog);
  for (const auto& [id, module] : catalog.modules) {
    write_module(catalog, id);
    write_variants(catalog, id);
  }
  write_index(catalog);
}

Catalog Repository::snapshot() const {
  std::shared_lock lock(mutex_);
  return catalog_;
}

void Repository::add_language(const std::string& code, const std::string& display_name) {
  require_writable();
  std::unique_lock lock(mutex_);
  LanguageRegistry next = catalog_.languages;
  saphir::add_language(next, code, display_name);
  Catalog staged = catalog_;
  staged.languages = std::move(next);
  write_languages(staged);
  catalog_.languages = std::move(staged.languages);
}

void Repository::check_assets(const Catalog& catalog, const ResourceDocument& document,
                              ValidationReport& report, const Path& at) const {
  for (const PictureRef* picture : pictures_of(document)) {
    if (!is_blank(picture->asset_id) && catalog.assets.count(picture->asset_id) == 0) {
      report.violations.push_back({ViolationCode::AssetUnresolved, at / picture->asset_id,
                                   "asset '" + picture->asset_id + "' is not in the repository"});
    }
  }
}

void Repository::put_module(const ModuleDescriptor& module) {
  require_writable();
  std::unique_lock lock(mutex_);
  ValidationReport report = validate_module(module);
  if (!catalog_.languages.contains(module.source_locale)) {
    report.violations.push_back({ViolationCode::UndeclaredLanguage,
                                 Path{{module.module_id, "source_locale"}},
                                 "source locale '" + module.source_locale + "' is not registered"});
  }
  for (const auto& [kind, document] : module.resources) {
    check_assets(catalog_, document, report, Path{{module.module_id, std::string(to_string(kind))}});
  }
  if (!report.is_valid()) throw ValidationError(std::move(report));

  Catalog next = catalog_;
  const std::string& id = module.module_id;
  auto existing = next.modules.find(id);
  if (existing != next.modules.end()) {
    for (const auto& [kind, document] : existing->second.resources) {
      if (module.resources.count(kind)) continue;
      const ResourceKey key{id, kind};
      std::erase_if(next.variants, [&](const auto& entry) { return entry.first.resource() == key; });
      next.revisions.erase(key);
      history_.erase(key);
    }
  }
  if (existing != next.modules.end() && existing->second.source_locale != module.source_locale) {
    // Variants in the new source locale would shadow the source.
    std::erase_if(next.variants, [&](const auto& entry) {
      return entry.first.module_id == id && entry.first.locale == module.source_locale;
    });
  }
  next.modules.insert_or_assign(id, module);
  for (const auto& [kind, document] : module.resources) {
    saphir::touch_source(next, id, kind);
    stamp({id, kind}, next.revision_of({id, kind}));
  }
  write_module(next, id);
  write_variants(next, id);
  write_index(next);
  catalog_ = std::move(next);
}

void Repository::delete_module(const std::string& module_id) {
  require_writable();
  std::unique_lock lock(mutex_);
  if (catalog_.find_module(module_id) == nullptr) {
    throw Error(ErrorCode::UnknownModule, "unknown module '" + module_id + "'");
  }
  Catalog next = catalog_;
  next.modules.erase(module_id);
  std::erase_if(next.revisions, [&](const auto& e) { return e.first.module_id == module_id; });
  std::erase_if(next.variants, [&](const auto& e) { return e.first.module_id == module_id; });
  std::erase_if(history_, [&](const auto& e) { return e.first.module_id == module_id; });
  write_index(next);
  remove_tree(dir_ / "modules" / module_id);
  remove_tree(dir_ / "variants" / module_id);
  catalog_ = std::move(next);
}

std::uint64_t Repository::put_resource(const std::string& module_id, const ResourceDocument& document) {
  require_writable();
  std::unique_lock lock(mutex_);
  const ModuleDescriptor* current = catalog_.find_module(module_id);
  if (current == nullptr) throw Error(ErrorCode::UnknownModule, "unknown module '" + module_id + "'");
  const ResourceKind kind = kind_of(document);

  ModuleDescriptor updated = *current;
  updated.resources.insert_or_assign(kind, document);
  ValidationReport report = validate_module(updated);
  check_assets(catalog_, document, report, Path{{module_id, std::string(to_string(kind))}});
  if (!report.is_valid()) throw ValidationError(std::move(report));

  Catalog next = catalog_;
  next.modules.insert_or_assign(module_id, std::move(updated));
  saphir::touch_source(next, module_id, kind);
  const std::uint64_t revision = next.revision_of({module_id, kind});
  stamp({module_id, kind}, revision);
  write_module(next, module_id);
  write_variants(next, module_id);
  catalog_ = std::move(next);
  return revision;
}

StoredResource Repository::get_resource(const std::string& module_id, ResourceKind kind) const {
  std::shared_lock lock(mutex_);
  const ResourceDocument* document = catalog_.find_source({module_id, kind});
  if (document == nullptr) {
    throw Error(ErrorCode::UnknownResource,
                "no " + std::string(to_string(kind)) + " in module '" + module_id + "'");
  }
  return {*document, catalog_.revision_of({module_id, kind})};
}

void Repository::delete_resource(const std::string& module_id, ResourceKind kind) {
  require_writable();
  std::unique_lock lock(mutex_);
  const ModuleDescriptor* current = catalog_.find_module(module_id);
  if (current == nullptr || current->resources.count(kind) == 0) {
    throw Error(ErrorCode::UnknownResource,
                "no " + std::string(to_string(kind)) + " in module '" + module_id + "'");
  }
  ModuleDescriptor updated = *current;
  updated.resources.erase(kind);
  ValidationReport report = validate_module(updated);
  if (!report.is_valid()) throw ValidationError(std::move(report));

  Catalog next = catalog_;
  next.modules.insert_or_assign(module_id, std::move(updated));
  next.revisions.erase({module_id, kind});
  std::erase_if(next.variants, [&](const auto& e) { return e.first.resource() == ResourceKey{module_id, kind}; });
  history_.erase({module_id, kind});
  write_module(next, module_id);
  write_variants(next, module_id);
  catalog_ = std::move(next);
}

Revision Repository::revision(const std::string& module_id, ResourceKind kind) const {
  std::shared_lock lock(mutex_);
  if (catalog_.find_source({module_id, kind}) == nullptr) {
    throw Error(ErrorCode::UnknownResource,
                "no " + std::string(to_string(kind)) + " in module '" + module_id + "'");
  }
  auto it = history_.find({module_id, kind});
  if (it != history_.end()) return it->second;
  return {{module_id, kind}, catalog_.revision_of({module_id, kind}), ""};
}

LocaleVariant Repository::upsert_variant(VariantInput input) {
  require_writable();
  std::unique_lock lock(mutex_);
  ValidationReport report;
  check_assets(catalog_, input.document, report,
               Path{{input.module_id, std::string(to_string(input.kind)) + "@" + input.locale}});
  Catalog next = catalog_;
  const std::string module_id = input.module_id;
  LocaleVariant stored = saphir::upsert_variant(next, std::move(input));
  if (!report.is_valid()) throw ValidationError(std::move(report));
  write_variants(next, module_id);
  catalog_ = std::move(next);
  return stored;
}

std::vector<VariantKey> Repository::touch_source(const std::string& module_id, ResourceKind kind) {
  require_writable();
  std::unique_lock lock(mutex_);
  Catalog next = catalog_;
  auto transitioned = saphir::touch_source(next, module_id, kind);
  stamp({module_id, kind}, next.revision_of({module_id, kind}));
  write_module(next, module_id);
  write_variants(next, module_id);
  catalog_ = std::move(next);
  return transitioned;
}

std::string Repository::put_asset(const std::string& media_type, std::string bytes) {
  require_writable();
  if (is_blank(media_type)) throw Error(ErrorCode::InvalidArgument, "media type is blank");
  std::unique_lock lock(mutex_);
  Asset asset{content_hash(bytes), media_type, std::move(bytes)};
  const std::string id = asset.asset_id;
  if (catalog_.assets.count(id)) return id;
  Catalog staged;
  staged.assets = catalog_.assets;
  staged.assets.emplace(id, asset);
  write_asset(asset);
  write_asset_index(staged);
  catalog_.assets.emplace(id, std::move(asset));
  return id;
}

std::optional<Asset> Repository::get_asset(const std::string& asset_id) const {
  std::shared_lock lock(mutex_);
  auto it = catalog_.assets.find(asset_id);
  if (it == catalog_.assets.end()) return std::nullopt;
  return it->second;
}

std::string Repository::export_pack(const std::optional<std::set<std::string>>& locales) const {
  std::shared_lock lock(mutex_);
  return write_pack(make_pack(catalog_, locales));
}

ImportReport Repository::import_pack(std::string_view bytes) {
  require_writable();
  ContentPack pack = read_pack(bytes);
  std::unique_lock lock(mutex_);
  Catalog next = catalog_;
  ImportReport report = saphir::import_pack(next, pack);
  for (const auto& [key, revision] : next.revisions) {
    if (catalog_.revision_of(key) != revision) stamp(key, revision);
  }
  write_all(next);
  catalog_ = std::move(next);
  return report;
}

PackStats Repository::stats() const {
  std::shared_lock lock(mutex_);
  return compute_stats(catalog_);
}

ValidationReport Repository::validate() const {
  std::shared_lock lock(mutex_);
  ContentPack pack{kPackFormatVersion, catalog_, compute_stats(catalog_)};
  return validate_pack(pack);
}

CompletenessReport Repository::completeness() const {
  std::shared_lock lock(mutex_);
  return completeness_report(catalog_);
}

void Repository::create_user(const std::string& login, std::string_view password, Role role,
                             std::set<std::string> locale_grants) {
  require_writable();
  std::unique_lock lock(mutex_);
  UserRegistry next = users_;
  next.create(login, password, role, std::move(locale_grants), catalog_.languages,
              options_.password_cost);
  std::swap(users_, next);
  try {
    write_users();
  } catch (...) {
    std::swap(users_, next);
    throw;
  }
}

std::optional<Credentials> Repository::verify_credentials(const std::string& login,
                                                          std::string_view password) const {
  UserRegistry users;
  {
    std::shared_lock lock(mutex_);
    users = users_;
  }
  return users.verify(login, password);
}

std::vector<Credentials> Repository::list_users() const {
  std::shared_lock lock(mutex_);
  std::vector<Credentials> out;
  for (const auto& [login, user] : users_.all()) out.push_back({login, user.role, user.locale_grants});
  return out;
}

}  // namespace saphir
