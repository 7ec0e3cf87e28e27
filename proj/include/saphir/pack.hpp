#pragma once

// Content pack: the offline delivery unit, serialized as a deterministic
// ustar archive.
//
//   manifest.json                          format_version, languages, stats, asset index
//   modules/<id>/module.json               module header and source revisions
//   modules/<id>/resources/<kind>.json     source documents
//   variants/<id>/<locale>/<kind>.json     Complete variants
//   assets/<sha256>                        asset bytes
//
// Every JSON entry uses the canonical serialization, entries are sorted by
// path, so identical content always yields identical bytes.

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "saphir/catalog.hpp"
#include "saphir/serialization.hpp"

namespace saphir {

// Records shared by packs and the on-disk repository layout.
Json to_json(const LocaleVariant& variant);
LocaleVariant variant_from_json(const Json& json);
Json languages_to_json(const LanguageRegistry& registry);
LanguageRegistry languages_from_json(const Json& json);
/// Module header: id, category, source locale, title and per-kind revisions.
Json module_header_to_json(const ModuleDescriptor& module, const Catalog& catalog);
/// Header fields into `module`; revisions into `revisions`.
void module_header_from_json(const Json& json, ModuleDescriptor& module,
                             std::map<ResourceKey, std::uint64_t>& revisions);

/// Modules, Complete variants of the requested locales (all when absent) and
/// the assets those documents reference. Throws Error(UnknownLocale) for an
/// unregistered requested locale.
ContentPack make_pack(const Catalog& catalog,
                      const std::optional<std::set<std::string>>& locales = std::nullopt);

std::string write_pack(const ContentPack& pack);

/// Throws Error(ParseError) or Error(VersionMismatch).
ContentPack read_pack(std::string_view bytes);

/// Languages, module headers, source resources, variants and assets.
std::size_t pack_item_count(const ContentPack& pack);

struct ImportReport {
  std::size_t created = 0;
  std::size_t updated = 0;
  std::size_t skipped = 0;

  friend bool operator==(const ImportReport&, const ImportReport&) = default;
};

Json to_json(const ImportReport& report);
Json to_json(const PackStats& stats);

/// Merges `pack` into `catalog`: contained items end up equal to the pack's,
/// everything else is kept. Source revisions never decrease; variants of
/// replaced sources that the pack does not carry become Stale. The catalog
/// is left untouched when the pack or the merged result fails validation
/// (Error(ValidationFailure)).
ImportReport import_pack(Catalog& catalog, const ContentPack& pack);

}  // namespace saphir
