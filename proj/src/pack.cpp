#include "saphir/pack.hpp"

#include <algorithm>

#include "saphir/error.hpp"
#include "saphir/localization.hpp"
#include "saphir/tar.hpp"
#include "saphir/validation.hpp"

namespace saphir {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::ParseError, "pack: " + what);
}

ResourceKind kind_from_file(const std::string& file) {
  constexpr std::string_view suffix = ".json";
  if (file.size() <= suffix.size() || file.compare(file.size() - suffix.size(), suffix.size(), suffix) != 0) {
    malformed("unexpected entry '" + file + "'");
  }
  auto kind = parse_resource_kind(file.substr(0, file.size() - suffix.size()));
  if (!kind) malformed("unknown resource kind in '" + file + "'");
  return *kind;
}

std::vector<std::string> split(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = path.find('/', start);
    parts.push_back(path.substr(start, slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return parts;
}

PackStats stats_from_json(const Json& json) {
  ObjectReader r(json, "stats");
  PackStats stats;
  stats.module_count = static_cast<std::size_t>(r.integer("module_count"));
  stats.resource_count = static_cast<std::size_t>(r.integer("resource_count"));
  stats.language_count = static_cast<std::size_t>(r.integer("language_count"));
  r.integer("category_count");
  ObjectReader per(r.required("modules_per_category"), r.where("modules_per_category"));
  for (auto category : kAllCategories) {
    stats.modules_per_category[category] =
        static_cast<std::size_t>(per.integer(std::string(to_string(category)).c_str()));
  }
  per.finish();
  r.finish();
  return stats;
}

// Documents a variant or module ships with, for asset collection.
void collect_assets(const ResourceDocument& document, std::set<std::string>& out) {
  for (const PictureRef* picture : pictures_of(document)) out.insert(picture->asset_id);
}

}  // namespace

Json to_json(const LocaleVariant& variant) {
  Json out = {{"module_id", variant.module_id},
              {"kind", std::string(to_string(variant.kind))},
              {"locale", variant.locale},
              {"status", std::string(to_string(variant.status))},
              {"source_revision", variant.source_revision},
              {"document", to_json(variant.document)}};
  if (variant.module_title) out["module_title"] = *variant.module_title;
  return out;
}

LocaleVariant variant_from_json(const Json& json) {
  ObjectReader r(json, "variant");
  LocaleVariant variant;
  variant.module_id = r.string("module_id");
  const auto kind_name = r.string("kind");
  const auto kind = parse_resource_kind(kind_name);
  if (!kind) throw Error(ErrorCode::ParseError, "variant.kind: unknown kind '" + kind_name + "'");
  variant.kind = *kind;
  variant.locale = r.string("locale");
  const auto status_name = r.string("status");
  const auto status = parse_variant_status(status_name);
  if (!status) throw Error(ErrorCode::ParseError, "variant.status: unknown status '" + status_name + "'");
  variant.status = *status;
  const auto revision = r.integer("source_revision");
  if (revision < 0) throw Error(ErrorCode::ParseError, "variant.source_revision: negative");
  variant.source_revision = static_cast<std::uint64_t>(revision);
  variant.module_title = r.optional_string("module_title");
  variant.document = document_from_json(variant.kind, r.required("document"));
  r.finish();
  return variant;
}

Json languages_to_json(const LanguageRegistry& registry) {
  Json out = Json::array();
  for (const auto& l : registry.list()) out.push_back({{"code", l.code}, {"display_name", l.display_name}});
  return out;
}

LanguageRegistry languages_from_json(const Json& json) {
  if (!json.is_array()) throw Error(ErrorCode::ParseError, "languages: expected array");
  LanguageRegistry registry;
  for (std::size_t i = 0; i < json.size(); ++i) {
    ObjectReader r(json[i], "languages[" + std::to_string(i) + "]");
    LanguageCode language{r.string("code"), r.string("display_name")};
    r.finish();
    try {
      registry.add(language);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, std::string("languages: ") + e.what());
    }
  }
  return registry;
}

Json module_header_to_json(const ModuleDescriptor& module, const Catalog& catalog) {
  Json revisions = Json::object();
  for (const auto& [kind, document] : module.resources) {
    revisions[std::string(to_string(kind))] = catalog.revision_of({module.module_id, kind});
  }
  return {{"module_id", module.module_id},
          {"category", std::string(to_string(module.category))},
          {"source_locale", module.source_locale},
          {"title", module.title},
          {"revisions", std::move(revisions)}};
}

void module_header_from_json(const Json& json, ModuleDescriptor& module,
                             std::map<ResourceKey, std::uint64_t>& revisions) {
  ObjectReader r(json, "module");
  module.module_id = r.string("module_id");
  const auto category_name = r.string("category");
  const auto category = parse_category(category_name);
  if (!category) throw Error(ErrorCode::ParseError, "module.category: unknown '" + category_name + "'");
  module.category = *category;
  module.source_locale = r.string("source_locale");
  module.title = r.string("title");
  ObjectReader revs(r.required("revisions"), r.where("revisions"));
  for (auto kind : kAllResourceKinds) {
    const std::string name(to_string(kind));
    if (revs.optional(name.c_str()) == nullptr) continue;
    const auto value = revs.integer(name.c_str());
    if (value < 1) throw Error(ErrorCode::ParseError, revs.where(name) + ": revision must be >= 1");
    revisions[{module.module_id, kind}] = static_cast<std::uint64_t>(value);
  }
  revs.finish();
  r.finish();
}

Json to_json(const PackStats& stats) {
  Json per = Json::object();
  for (const auto& [category, count] : stats.modules_per_category) {
    per[std::string(to_string(category))] = count;
  }
  return {{"module_count", stats.module_count},
          {"resource_count", stats.resource_count},
          {"language_count", stats.language_count},
          {"category_count", stats.category_count()},
          {"modules_per_category", std::move(per)}};
}

Json to_json(const ImportReport& report) {
  return {{"created", report.created}, {"updated", report.updated}, {"skipped", report.skipped}};
}

ContentPack make_pack(const Catalog& catalog, const std::optional<std::set<std::string>>& locales) {
  if (locales) {
    for (const auto& code : *locales) {
      if (!catalog.languages.contains(code)) {
        throw Error(ErrorCode::UnknownLocale, "language '" + code + "' is not registered");
      }
    }
  }
  ContentPack pack;
  Catalog& out = pack.catalog;
  out.languages = catalog.languages;
  out.modules = catalog.modules;
  std::set<std::string> asset_ids;
  for (const auto& [id, module] : catalog.modules) {
    for (const auto& [kind, document] : module.resources) {
      out.revisions[{id, kind}] = std::max<std::uint64_t>(1, catalog.revision_of({id, kind}));
      collect_assets(document, asset_ids);
    }
  }
  for (const auto& [key, variant] : catalog.variants) {
    if (variant.status != VariantStatus::Complete) continue;
    if (locales && locales->count(key.locale) == 0) continue;
    out.variants.emplace(key, variant);
    collect_assets(variant.document, asset_ids);
  }
  for (const auto& id : asset_ids) {
    auto it = catalog.assets.find(id);
    if (it != catalog.assets.end()) out.assets.emplace(id, it->second);
  }
  pack.stats = compute_stats(out);
  return pack;
}

std::string write_pack(const ContentPack& pack) {
  const Catalog& catalog = pack.catalog;
  std::vector<tar::Entry> entries;

  Json asset_index = Json::array();
  for (const auto& [id, asset] : catalog.assets) {
    asset_index.push_back({{"asset_id", id}, {"media_type", asset.media_type}, {"size", asset.bytes.size()}});
    entries.push_back({"assets/" + id, asset.bytes});
  }
  Json manifest = {{"format_version", pack.format_version},
                   {"languages", languages_to_json(catalog.languages)},
                   {"stats", to_json(pack.stats)},
                   {"assets", std::move(asset_index)}};
  entries.push_back({"manifest.json", canonical_dump(manifest)});

  for (const auto& [id, module] : catalog.modules) {
    const std::string base = "modules/" + id + "/";
    entries.push_back({base + "module.json", canonical_dump(module_header_to_json(module, catalog))});
    for (const auto& [kind, document] : module.resources) {
      entries.push_back({base + "resources/" + std::string(to_string(kind)) + ".json",
                         canonical_serialize(document)});
    }
  }
  for (const auto& [key, variant] : catalog.variants) {
    entries.push_back({"variants/" + key.module_id + "/" + key.locale + "/" +
                           std::string(to_string(key.kind)) + ".json",
                       canonical_dump(to_json(variant))});
  }
  std::sort(entries.begin(), entries.end(),
            [](const tar::Entry& a, const tar::Entry& b) { return a.path < b.path; });
  return tar::write(entries);
}

ContentPack read_pack(std::string_view bytes) {
  std::map<std::string, std::string> files;
  for (auto& entry : tar::read(bytes)) {
    if (!files.emplace(entry.path, std::move(entry.bytes)).second) {
      malformed("duplicate entry '" + entry.path + "'");
    }
  }
  auto manifest_it = files.find("manifest.json");
  if (manifest_it == files.end()) malformed("missing manifest.json");
  const Json manifest = parse_json(manifest_it->second);
  files.erase(manifest_it);

  ObjectReader m(manifest, "manifest");
  const Json& version = m.required("format_version");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kPackFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "unsupported pack format_version " + version.dump() + ", expected " +
                    std::to_string(kPackFormatVersion));
  }

  ContentPack pack;
  Catalog& catalog = pack.catalog;
  catalog.languages = languages_from_json(m.required("languages"));
  const PackStats declared = stats_from_json(m.required("stats"));
  const Json& asset_index = m.array("assets");
  m.finish();

  for (std::size_t i = 0; i < asset_index.size(); ++i) {
    ObjectReader a(asset_index[i], "manifest.assets[" + std::to_string(i) + "]");
    Asset asset;
    asset.asset_id = a.string("asset_id");
    asset.media_type = a.string("media_type");
    const auto size = a.integer("size");
    a.finish();
    auto it = files.find("assets/" + asset.asset_id);
    if (it == files.end()) malformed("missing bytes for asset " + asset.asset_id);
    if (static_cast<std::int64_t>(it->second.size()) != size) malformed("asset size mismatch for " + asset.asset_id);
    asset.bytes = std::move(it->second);
    files.erase(it);
    catalog.assets.emplace(asset.asset_id, std::move(asset));
  }

  // Headers first so resources can attach to their modules.
  for (auto it = files.begin(); it != files.end();) {
    const auto parts = split(it->first);
    if (parts.size() == 3 && parts[0] == "modules" && parts[2] == "module.json") {
      ModuleDescriptor module;
      module_header_from_json(parse_json(it->second), module, catalog.revisions);
      if (module.module_id != parts[1]) malformed("module id does not match path " + it->first);
      catalog.modules.emplace(module.module_id, std::move(module));
      it = files.erase(it);
    } else {
      ++it;
    }
  }

  for (const auto& [path, content] : files) {
    const auto parts = split(path);
    if (parts.size() == 4 && parts[0] == "modules" && parts[2] == "resources") {
      auto module = catalog.modules.find(parts[1]);
      if (module == catalog.modules.end()) malformed("resource without module header: " + path);
      const ResourceKind kind = kind_from_file(parts[3]);
      module->second.resources.emplace(kind, document_from_json(kind, parse_json(content)));
      if (catalog.revisions.count({parts[1], kind}) == 0) malformed("no revision for " + path);
    } else if (parts.size() == 4 && parts[0] == "variants") {
      LocaleVariant variant = variant_from_json(parse_json(content));
      if (variant.module_id != parts[1] || variant.locale != parts[2] ||
          variant.kind != kind_from_file(parts[3])) {
        malformed("variant does not match its path " + path);
      }
      catalog.variants.emplace(variant.key(), std::move(variant));
    } else {
      malformed("unexpected entry '" + path + "'");
    }
  }
  for (const auto& [key, revision] : catalog.revisions) {
    if (catalog.find_source(key) == nullptr) malformed("revision for missing resource " + key.str());
  }

  pack.stats = compute_stats(catalog);
  if (!(pack.stats == declared)) malformed("manifest stats do not match content");
  return pack;
}

std::size_t pack_item_count(const ContentPack& pack) {
  const Catalog& c = pack.catalog;
  std::size_t count = c.languages.size() + c.modules.size() + c.variants.size() + c.assets.size();
  for (const auto& [id, module] : c.modules) count += module.resources.size();
  return count;
}

ImportReport import_pack(Catalog& catalog, const ContentPack& pack) {
  ValidationReport pack_report = validate_pack(pack);
  if (!pack_report.is_valid()) throw ValidationError(std::move(pack_report));

  Catalog next = catalog;
  ImportReport report;
  auto count = [&](bool existed, bool same) {
    if (!existed) {
      ++report.created;
    } else if (same) {
      ++report.skipped;
    } else {
      ++report.updated;
    }
  };

  for (const auto& language : pack.catalog.languages.list()) {
    const LanguageCode* existing = next.languages.find(language.code);
    count(existing != nullptr, existing != nullptr && *existing == language);
    if (existing == nullptr) {
      next.languages.add(language);
    } else if (!(*existing == language)) {
      // Registry entries are immutable apart from the display name.
      LanguageRegistry rebuilt;
      for (const auto& l : next.languages.list()) rebuilt.add(l.code == language.code ? language : l);
      next.languages = std::move(rebuilt);
    }
  }

  for (const auto& [id, asset] : pack.catalog.assets) {
    const bool existed = next.assets.count(id) > 0;
    count(existed, existed);
    if (!existed) next.assets.emplace(id, asset);
  }

  // Pack revision -> repository revision, per resource, for variant mapping.
  std::map<ResourceKey, std::pair<std::uint64_t, std::uint64_t>> revision_map;
  for (const auto& [id, incoming] : pack.catalog.modules) {
    auto [slot, created] = next.modules.try_emplace(id, incoming);
    ModuleDescriptor& module = slot->second;
    if (created) module.resources.clear();
    const bool same_header = !created && module.category == incoming.category &&
                             module.source_locale == incoming.source_locale &&
                             module.title == incoming.title;
    count(!created, same_header);
    if (!same_header) {
      module.category = incoming.category;
      module.source_locale = incoming.source_locale;
      module.title = incoming.title;
    }
    for (const auto& [kind, document] : incoming.resources) {
      const ResourceKey key{id, kind};
      const std::uint64_t pack_revision = pack.catalog.revision_of(key);
      const std::uint64_t current = next.revision_of(key);
      auto existing = module.resources.find(kind);
      const bool existed = existing != module.resources.end();
      const bool same = existed && existing->second == document;
      count(existed, same);
      if (same) {
        revision_map[key] = {pack_revision, current};
        continue;
      }
      const std::uint64_t revision = std::max(pack_revision, current + 1);
      module.resources.insert_or_assign(kind, document);
      next.revisions[key] = revision;
      revision_map[key] = {pack_revision, revision};
      for (auto& [vkey, variant] : next.variants) {
        if (vkey.resource() == key && variant.status != VariantStatus::Stale &&
            variant.source_revision < revision) {
          variant.status = VariantStatus::Stale;
        }
      }
    }
  }

  for (const auto& [key, incoming] : pack.catalog.variants) {
    LocaleVariant variant = incoming;
    auto mapping = revision_map.find(key.resource());
    if (mapping != revision_map.end() && variant.source_revision == mapping->second.first) {
      variant.source_revision = mapping->second.second;
    }
    auto existing = next.variants.find(key);
    const bool existed = existing != next.variants.end();
    count(existed, existed && existing->second == variant);
    next.variants.insert_or_assign(key, std::move(variant));
  }

  ContentPack merged{kPackFormatVersion, next, {}};
  ValidationReport merged_report = validate_pack(merged);
  if (!merged_report.is_valid()) throw ValidationError(std::move(merged_report));

  catalog = std::move(next);
  return report;
}

}  // namespace saphir
