#include "saphir/catalog.hpp"

#include <algorithm>

#include <sodium.h>

#include "saphir/error.hpp"

namespace saphir {

std::string_view to_string(VariantStatus status) noexcept {
  switch (status) {
    case VariantStatus::Draft: return "draft";
    case VariantStatus::Complete: return "complete";
    case VariantStatus::Stale: return "stale";
  }
  return "";
}

std::optional<VariantStatus> parse_variant_status(std::string_view text) {
  for (auto status : {VariantStatus::Draft, VariantStatus::Complete, VariantStatus::Stale}) {
    if (to_string(status) == text) return status;
  }
  return std::nullopt;
}

std::string ResourceKey::str() const { return module_id + "/" + std::string(to_string(kind)); }

std::string VariantKey::str() const {
  return module_id + "/" + std::string(to_string(kind)) + "@" + locale;
}

std::string content_hash(std::string_view bytes) {
  static const bool sodium_ready = sodium_init() >= 0;
  if (!sodium_ready) throw Error(ErrorCode::IoError, "libsodium failed to initialize");
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  char hex[crypto_hash_sha256_BYTES * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return hex;
}

void LanguageRegistry::add(const LanguageCode& language) {
  if (!is_well_formed_language_code(language.code)) {
    throw Error(ErrorCode::MalformedLanguageCode,
                "malformed language code '" + language.code + "'");
  }
  if (contains(language.code)) {
    throw Error(ErrorCode::DuplicateLanguage, "language '" + language.code + "' already registered");
  }
  languages_.push_back(language);
}

bool LanguageRegistry::contains(std::string_view code) const { return find(code) != nullptr; }

const LanguageCode* LanguageRegistry::find(std::string_view code) const {
  auto it = std::find_if(languages_.begin(), languages_.end(),
                         [&](const LanguageCode& l) { return l.code == code; });
  return it == languages_.end() ? nullptr : &*it;
}

const ModuleDescriptor* Catalog::find_module(std::string_view module_id) const {
  auto it = modules.find(std::string(module_id));
  return it == modules.end() ? nullptr : &it->second;
}

const ResourceDocument* Catalog::find_source(const ResourceKey& key) const {
  const ModuleDescriptor* module = find_module(key.module_id);
  if (module == nullptr) return nullptr;
  auto it = module->resources.find(key.kind);
  return it == module->resources.end() ? nullptr : &it->second;
}

std::uint64_t Catalog::revision_of(const ResourceKey& key) const {
  auto it = revisions.find(key);
  return it == revisions.end() ? 0 : it->second;
}

std::size_t PackStats::category_count() const {
  return static_cast<std::size_t>(std::count_if(
      modules_per_category.begin(), modules_per_category.end(),
      [](const auto& entry) { return entry.second > 0; }));
}

PackStats compute_stats(const Catalog& catalog) {
  PackStats stats;
  for (auto category : kAllCategories) stats.modules_per_category[category] = 0;
  for (const auto& [id, module] : catalog.modules) {
    ++stats.module_count;
    stats.resource_count += count_playable_resources(module);
    ++stats.modules_per_category[module.category];
  }
  stats.language_count = catalog.languages.size();
  return stats;
}

}  // namespace saphir
