#include "saphir/localization.hpp"

#include "saphir/error.hpp"

namespace saphir {

std::string ValidationError::summarize(const ValidationReport& report) {
  std::string out = "validation failed";
  if (!report.violations.empty()) {
    const auto& first = report.violations.front();
    out += ": " + std::string(to_string(first.code)) + " at " + first.path.str();
    if (report.violations.size() > 1) {
      out += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    }
  }
  return out;
}

void add_language(LanguageRegistry& registry, const std::string& code,
                  const std::string& display_name) {
  if (is_blank(display_name)) {
    throw Error(ErrorCode::InvalidArgument, "language display name is blank");
  }
  registry.add({code, display_name});
}

const LocaleVariant& upsert_variant(Catalog& catalog, VariantInput input) {
  if (!catalog.languages.contains(input.locale)) {
    throw Error(ErrorCode::UnknownLocale, "language '" + input.locale + "' is not registered");
  }
  const ModuleDescriptor* module = catalog.find_module(input.module_id);
  if (module == nullptr || module->resources.count(input.kind) == 0) {
    throw Error(ErrorCode::UnknownSourceResource,
                "no source " + std::string(to_string(input.kind)) + " in module '" +
                    input.module_id + "'");
  }
  if (input.locale == module->source_locale) {
    throw Error(ErrorCode::InvalidArgument,
                "'" + input.locale + "' is the source locale of module '" + input.module_id + "'");
  }
  if (kind_of(input.document) != input.kind) {
    throw Error(ErrorCode::InvalidArgument, "document kind does not match the resource kind");
  }
  if (input.status == VariantStatus::Stale) {
    throw Error(ErrorCode::InvalidArgument, "variants cannot be written as stale");
  }

  VariantKey key{input.module_id, input.kind, input.locale};
  if (input.status == VariantStatus::Complete) {
    // Lessons are checked against the quiz the same learner would be served.
    const Quiz* quiz = module->get<Quiz>();
    if (input.kind == ResourceKind::Lesson) {
      auto it = catalog.variants.find({input.module_id, ResourceKind::Quiz, input.locale});
      if (it != catalog.variants.end() && it->second.status == VariantStatus::Complete) {
        quiz = std::get_if<Quiz>(&it->second.document);
      }
    }
    Path at{{input.module_id, std::string(to_string(input.kind)) + "@" + input.locale}};
    ValidationReport report = validate_document(input.document, quiz, at);
    if (input.module_title && is_blank(*input.module_title)) {
      report.violations.push_back(
          {ViolationCode::EmptyField, at / "module_title", "module_title is blank"});
    }
    if (!report.is_valid()) throw ValidationError(std::move(report));
  }

  LocaleVariant variant{input.module_id,
                        input.kind,
                        input.locale,
                        std::move(input.document),
                        input.status,
                        catalog.revision_of(key.resource()),
                        std::move(input.module_title)};
  auto [it, inserted] = catalog.variants.insert_or_assign(key, std::move(variant));
  return it->second;
}

Resolved resolve(const Catalog& catalog, const std::string& module_id, ResourceKind kind,
                 const std::string& requested) {
  const ModuleDescriptor* module = catalog.find_module(module_id);
  const ResourceDocument* source = catalog.find_source({module_id, kind});
  if (module == nullptr || source == nullptr) {
    throw Error(ErrorCode::UnknownResource,
                "no " + std::string(to_string(kind)) + " in module '" + module_id + "'");
  }
  if (requested != module->source_locale) {
    auto it = catalog.variants.find({module_id, kind, requested});
    if (it != catalog.variants.end() && it->second.status == VariantStatus::Complete) {
      return {&it->second.document, requested, false};
    }
    return {source, module->source_locale, true};
  }
  return {source, module->source_locale, false};
}

ResolvedTitle resolve_module_title(const Catalog& catalog, const ModuleDescriptor& module,
                                   const std::string& requested) {
  if (requested != module.source_locale) {
    for (auto kind : kAllResourceKinds) {
      auto it = catalog.variants.find({module.module_id, kind, requested});
      if (it != catalog.variants.end() && it->second.status == VariantStatus::Complete &&
          it->second.module_title) {
        return {*it->second.module_title, requested, false};
      }
    }
    return {module.title, module.source_locale, true};
  }
  return {module.title, module.source_locale, false};
}

std::vector<VariantKey> touch_source(Catalog& catalog, const std::string& module_id,
                                     ResourceKind kind) {
  ResourceKey resource{module_id, kind};
  if (catalog.find_source(resource) == nullptr) {
    throw Error(ErrorCode::UnknownResource, "no source resource " + resource.str());
  }
  const std::uint64_t revision = ++catalog.revisions[resource];
  std::vector<VariantKey> transitioned;
  for (auto& [key, variant] : catalog.variants) {
    if (key.resource() != resource) continue;
    if (variant.status != VariantStatus::Stale && variant.source_revision < revision) {
      variant.status = VariantStatus::Stale;
      transitioned.push_back(key);
    }
  }
  return transitioned;
}

CompletenessReport completeness_report(const Catalog& catalog) {
  CompletenessReport report;
  for (const auto& language : catalog.languages.list()) {
    LocaleCompleteness row;
    for (const auto& [module_id, module] : catalog.modules) {
      if (module.source_locale == language.code) continue;
      ModuleCompleteness cell;
      for (const auto& [kind, document] : module.resources) {
        auto it = catalog.variants.find({module_id, kind, language.code});
        if (it == catalog.variants.end()) {
          cell.missing.push_back(kind);
          ++cell.counts.missing;
          continue;
        }
        cell.present[kind] = it->second.status;
        switch (it->second.status) {
          case VariantStatus::Complete: ++cell.counts.complete; break;
          case VariantStatus::Draft: ++cell.counts.draft; break;
          case VariantStatus::Stale: ++cell.counts.stale; break;
        }
      }
      row.counts.complete += cell.counts.complete;
      row.counts.draft += cell.counts.draft;
      row.counts.stale += cell.counts.stale;
      row.counts.missing += cell.counts.missing;
      row.modules.emplace(module_id, std::move(cell));
    }
    if (row.modules.empty()) continue;
    const std::size_t total = row.counts.total();
    row.coverage = total == 0 ? 1.0 : static_cast<double>(row.counts.complete) / total;
    report.locales.emplace(language.code, std::move(row));
  }
  for (const auto& [module_id, module] : catalog.modules) {
    if (module.resources.count(ResourceKind::Lesson) && !module.resources.count(ResourceKind::Quiz)) {
      report.lessons_without_quiz.push_back(module_id);
    }
  }
  return report;
}

namespace {

Json counts_json(const StatusCounts& c) {
  return {{"complete", c.complete}, {"draft", c.draft}, {"stale", c.stale}, {"missing", c.missing}};
}

}  // namespace

Json to_json(const CompletenessReport& report) {
  Json locales = Json::object();
  for (const auto& [locale, row] : report.locales) {
    Json modules = Json::object();
    for (const auto& [module_id, cell] : row.modules) {
      Json kinds = Json::object();
      for (const auto& [kind, status] : cell.present) {
        kinds[std::string(to_string(kind))] = std::string(to_string(status));
      }
      for (auto kind : cell.missing) kinds[std::string(to_string(kind))] = "missing";
      modules[module_id] = {{"counts", counts_json(cell.counts)}, {"kinds", std::move(kinds)}};
    }
    locales[locale] = {{"coverage", row.coverage},
                       {"counts", counts_json(row.counts)},
                       {"modules", std::move(modules)}};
  }
  Json advisories = Json::array();
  for (const auto& module_id : report.lessons_without_quiz) {
    advisories.push_back({{"code", "LESSON_WITHOUT_QUIZ"}, {"module_id", module_id}});
  }
  return {{"locales", std::move(locales)}, {"advisories", std::move(advisories)}};
}

}  // namespace saphir
