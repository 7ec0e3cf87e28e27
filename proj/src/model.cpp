#include "saphir/model.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "saphir/error.hpp"

namespace saphir {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::UnresolvedLink: return "unresolved_link";
    case ErrorCode::EmptyQuiz: return "empty_quiz";
    case ErrorCode::EmptyPool: return "empty_pool";
    case ErrorCode::UnknownQuestion: return "unknown_question";
    case ErrorCode::UnknownProposition: return "unknown_proposition";
    case ErrorCode::UnknownCategory: return "unknown_category";
    case ErrorCode::UnknownCard: return "unknown_card";
    case ErrorCode::SameCard: return "same_card";
    case ErrorCode::ModeNotEnabled: return "mode_not_enabled";
    case ErrorCode::DuplicateLanguage: return "duplicate_language";
    case ErrorCode::MalformedLanguageCode: return "malformed_language_code";
    case ErrorCode::UnknownLocale: return "unknown_locale";
    case ErrorCode::UnknownSourceResource: return "unknown_source_resource";
    case ErrorCode::UnknownResource: return "unknown_resource";
    case ErrorCode::UnknownModule: return "unknown_module";
    case ErrorCode::ValidationFailure: return "validation_failure";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::CorruptRepository: return "corrupt_repository";
    case ErrorCode::RepositoryLocked: return "repository_locked";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::VersionMismatch: return "version_mismatch";
    case ErrorCode::DuplicateLogin: return "duplicate_login";
    case ErrorCode::WeakPassword: return "weak_password";
    case ErrorCode::InvalidGrants: return "invalid_grants";
    case ErrorCode::UnknownUser: return "unknown_user";
    case ErrorCode::UnknownAsset: return "unknown_asset";
  }
  return "unknown";
}

std::string_view to_string(ElementCategory category) noexcept {
  switch (category) {
    case ElementCategory::Water: return "water";
    case ElementCategory::Air: return "air";
    case ElementCategory::Earth: return "earth";
    case ElementCategory::Energy: return "energy";
  }
  return "";
}

std::string_view to_string(ResourceKind kind) noexcept {
  switch (kind) {
    case ResourceKind::Lesson: return "lesson";
    case ResourceKind::Quiz: return "quiz";
    case ResourceKind::MemoSet: return "memo_set";
    case ResourceKind::AssociationGame: return "association_game";
    case ResourceKind::CycleGameRef: return "cycle_game_ref";
    case ResourceKind::ExperimentRef: return "experiment_ref";
    case ResourceKind::VideoLink: return "video_link";
    case ResourceKind::PedagogicalSupport: return "pedagogical_support";
  }
  return "";
}

std::string_view to_string(MemoMode mode) noexcept {
  switch (mode) {
    case MemoMode::Classical: return "classical";
    case MemoMode::Easy: return "easy";
    case MemoMode::Difficult: return "difficult";
  }
  return "";
}

std::optional<ElementCategory> parse_category(std::string_view text) {
  for (auto category : kAllCategories) {
    if (to_string(category) == text) return category;
  }
  return std::nullopt;
}

std::optional<ResourceKind> parse_resource_kind(std::string_view text) {
  for (auto kind : kAllResourceKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::optional<MemoMode> parse_memo_mode(std::string_view text) {
  for (auto mode : kAllMemoModes) {
    if (to_string(mode) == text) return mode;
  }
  return std::nullopt;
}

bool is_well_formed_language_code(std::string_view code) {
  static const std::regex pattern("[a-z]{2,3}(-[A-Za-z0-9]{2,8})*");
  return std::regex_match(code.begin(), code.end(), pattern);
}

bool is_well_formed_module_id(std::string_view id) {
  static const std::regex pattern("[A-Za-z0-9][A-Za-z0-9._-]{0,63}");
  return std::regex_match(id.begin(), id.end(), pattern);
}

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

const Question* Quiz::find(std::string_view question_id) const {
  auto it = std::find_if(questions.begin(), questions.end(),
                         [&](const Question& q) { return q.question_id == question_id; });
  return it == questions.end() ? nullptr : &*it;
}

bool MemoSet::is_enabled(MemoMode mode) const {
  return std::find(enabled_modes.begin(), enabled_modes.end(), mode) != enabled_modes.end();
}

ResourceKind kind_of(const ResourceDocument& document) noexcept {
  // Variant alternatives are declared in ResourceKind order.
  return static_cast<ResourceKind>(document.index());
}

std::size_t count_playable_resources(const ModuleDescriptor& module) {
  std::size_t count = 0;
  for (const auto& [kind, document] : module.resources) {
    switch (kind) {
      case ResourceKind::PedagogicalSupport:
        break;
      case ResourceKind::MemoSet:
        if (const auto* memo = std::get_if<MemoSet>(&document)) {
          count += memo->enabled_modes.size();
        }
        break;
      default:
        ++count;
    }
  }
  return count;
}

std::vector<Question> page_question_pool(const LessonPage& page, const Quiz& quiz) {
  std::vector<Question> pool;
  pool.reserve(page.linked_question_ids.size());
  for (const auto& id : page.linked_question_ids) {
    const Question* question = quiz.find(id);
    if (question == nullptr) {
      throw Error(ErrorCode::UnresolvedLink,
                  "page '" + page.page_id + "' links unknown question '" + id + "'");
    }
    pool.push_back(*question);
  }
  return pool;
}

}  // namespace saphir
