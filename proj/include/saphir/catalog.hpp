#pragma once

// In-memory content state shared by the repository, packs and the
// localization workflow.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saphir/model.hpp"

namespace saphir {

enum class VariantStatus { Draft, Complete, Stale };

std::string_view to_string(VariantStatus status) noexcept;
std::optional<VariantStatus> parse_variant_status(std::string_view text);

struct ResourceKey {
  std::string module_id;
  ResourceKind kind = ResourceKind::Lesson;

  auto operator<=>(const ResourceKey&) const = default;
  std::string str() const;
};

struct VariantKey {
  std::string module_id;
  ResourceKind kind = ResourceKind::Lesson;
  std::string locale;

  auto operator<=>(const VariantKey&) const = default;
  ResourceKey resource() const { return {module_id, kind}; }
  std::string str() const;
};

/// A full per-language document for one source resource. `module_title`
/// lets a translator localize the module title shown in the catalog.
struct LocaleVariant {
  std::string module_id;
  ResourceKind kind = ResourceKind::Lesson;
  std::string locale;
  ResourceDocument document;
  VariantStatus status = VariantStatus::Draft;
  std::uint64_t source_revision = 0;
  std::optional<std::string> module_title;

  VariantKey key() const { return {module_id, kind, locale}; }
  friend bool operator==(const LocaleVariant&, const LocaleVariant&) = default;
};

struct Asset {
  std::string asset_id;  // lowercase hex SHA-256 of bytes
  std::string media_type;
  std::string bytes;

  friend bool operator==(const Asset&, const Asset&) = default;
};

/// Lowercase hex SHA-256, used as asset id.
std::string content_hash(std::string_view bytes);

class LanguageRegistry {
public:
  /// Throws Error(MalformedLanguageCode) or Error(DuplicateLanguage).
  void add(const LanguageCode& language);
  bool contains(std::string_view code) const;
  const LanguageCode* find(std::string_view code) const;
  const std::vector<LanguageCode>& list() const noexcept { return languages_; }
  std::size_t size() const noexcept { return languages_.size(); }

  friend bool operator==(const LanguageRegistry&, const LanguageRegistry&) = default;

private:
  std::vector<LanguageCode> languages_;  // registration order
};

struct Catalog {
  LanguageRegistry languages;
  std::map<std::string, ModuleDescriptor> modules;
  std::map<ResourceKey, std::uint64_t> revisions;
  std::map<VariantKey, LocaleVariant> variants;
  std::map<std::string, Asset> assets;

  const ModuleDescriptor* find_module(std::string_view module_id) const;
  const ResourceDocument* find_source(const ResourceKey& key) const;
  std::uint64_t revision_of(const ResourceKey& key) const;

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

struct PackStats {
  std::size_t module_count = 0;
  std::size_t resource_count = 0;  // sum of count_playable_resources
  std::size_t language_count = 0;
  std::map<ElementCategory, std::size_t> modules_per_category;

  std::size_t category_count() const;
  friend bool operator==(const PackStats&, const PackStats&) = default;
};

PackStats compute_stats(const Catalog& catalog);

inline constexpr int kPackFormatVersion = 1;

/// The offline delivery unit: source modules, variants and assets.
struct ContentPack {
  int format_version = kPackFormatVersion;
  Catalog catalog;
  PackStats stats;
};

}  // namespace saphir
