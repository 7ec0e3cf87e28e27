#pragma once

// Translator workflow over a Catalog: per-language variants, revision-based
// staleness, one-step fallback resolution and completeness reporting.
// Callers serialize mutations (the repository holds the writer lock).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saphir/catalog.hpp"
#include "saphir/error.hpp"
#include "saphir/serialization.hpp"
#include "saphir/validation.hpp"

namespace saphir {

/// Thrown when a write is refused by structural validation.
class ValidationError : public Error {
public:
  explicit ValidationError(ValidationReport report)
      : Error(ErrorCode::ValidationFailure, summarize(report)), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

private:
  static std::string summarize(const ValidationReport& report);
  ValidationReport report_;
};

void add_language(LanguageRegistry& registry, const std::string& code,
                  const std::string& display_name);

struct VariantInput {
  std::string module_id;
  ResourceKind kind = ResourceKind::Lesson;
  std::string locale;
  ResourceDocument document;
  VariantStatus status = VariantStatus::Draft;
  std::optional<std::string> module_title;
};

/// Stores the variant against the current source revision. Only Draft and
/// Complete may be written; Complete documents must pass validation.
const LocaleVariant& upsert_variant(Catalog& catalog, VariantInput input);

struct Resolved {
  const ResourceDocument* document = nullptr;
  std::string resolved_locale;
  bool fallback_used = false;
};

/// The Complete variant for `requested`, else the source document. Draft and
/// Stale variants are never returned.
Resolved resolve(const Catalog& catalog, const std::string& module_id, ResourceKind kind,
                 const std::string& requested);

/// Module title for `requested`: the first Complete variant (in kind order)
/// carrying a module title, else the source title.
struct ResolvedTitle {
  std::string title;
  std::string resolved_locale;
  bool fallback_used = false;
};
ResolvedTitle resolve_module_title(const Catalog& catalog, const ModuleDescriptor& module,
                                   const std::string& requested);

/// Bumps the source revision and marks older Draft/Complete variants Stale.
/// Returns the keys that changed status.
std::vector<VariantKey> touch_source(Catalog& catalog, const std::string& module_id,
                                     ResourceKind kind);

struct StatusCounts {
  std::size_t complete = 0;
  std::size_t draft = 0;
  std::size_t stale = 0;
  std::size_t missing = 0;

  std::size_t total() const { return complete + draft + stale + missing; }
};

struct ModuleCompleteness {
  std::map<ResourceKind, VariantStatus> present;  // kinds without an entry are missing
  std::vector<ResourceKind> missing;
  StatusCounts counts;
};

struct LocaleCompleteness {
  std::map<std::string, ModuleCompleteness> modules;
  StatusCounts counts;
  double coverage = 0.0;  // Complete / source resources
};

/// One entry per registered locale that is not the source locale of every
/// module; modules authored in that locale are left out of its row.
struct CompletenessReport {
  std::map<std::string, LocaleCompleteness> locales;
  /// Advisory: modules with a lesson but no quiz, where the per-page
  /// self-test cannot run.
  std::vector<std::string> lessons_without_quiz;
};

CompletenessReport completeness_report(const Catalog& catalog);
Json to_json(const CompletenessReport& report);

}  // namespace saphir
