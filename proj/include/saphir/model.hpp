#pragma once

// Resource model: modules, their typed resources and the projections that
// need nothing but the model itself.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace saphir {

enum class ElementCategory { Water, Air, Earth, Energy };

enum class ResourceKind {
  Lesson,
  Quiz,
  MemoSet,
  AssociationGame,
  CycleGameRef,
  ExperimentRef,
  VideoLink,
  PedagogicalSupport,
};

enum class MemoMode { Classical, Easy, Difficult };

inline constexpr ElementCategory kAllCategories[] = {
    ElementCategory::Water, ElementCategory::Air, ElementCategory::Earth,
    ElementCategory::Energy};

inline constexpr ResourceKind kAllResourceKinds[] = {
    ResourceKind::Lesson,        ResourceKind::Quiz,
    ResourceKind::MemoSet,       ResourceKind::AssociationGame,
    ResourceKind::CycleGameRef,  ResourceKind::ExperimentRef,
    ResourceKind::VideoLink,     ResourceKind::PedagogicalSupport};

inline constexpr MemoMode kAllMemoModes[] = {MemoMode::Classical, MemoMode::Easy,
                                             MemoMode::Difficult};

inline constexpr std::size_t kMaxPlayableResources = 9;
inline constexpr std::size_t kMinPropositions = 2;
inline constexpr std::size_t kMaxPropositions = 10;
inline constexpr std::size_t kMemoTriplets = 6;
inline constexpr std::size_t kAssociationCategories = 2;
inline constexpr std::size_t kMinAssociationPropositions = 2;

// Stable wire names ("water", "memo_set", "classical", ...).
std::string_view to_string(ElementCategory category) noexcept;
std::string_view to_string(ResourceKind kind) noexcept;
std::string_view to_string(MemoMode mode) noexcept;
std::optional<ElementCategory> parse_category(std::string_view text);
std::optional<ResourceKind> parse_resource_kind(std::string_view text);
std::optional<MemoMode> parse_memo_mode(std::string_view text);

struct LanguageCode {
  std::string code;
  std::string display_name;

  friend bool operator==(const LanguageCode&, const LanguageCode&) = default;
};

/// True when `code` matches `[a-z]{2,3}(-[A-Za-z0-9]{2,8})*`.
bool is_well_formed_language_code(std::string_view code);

/// Module ids double as path components in repositories and packs, so they
/// are restricted to `[A-Za-z0-9][A-Za-z0-9._-]{0,63}`.
bool is_well_formed_module_id(std::string_view id);

/// Whitespace-only strings count as blank.
bool is_blank(std::string_view text);

struct PictureRef {
  std::string asset_id;
  std::string alt_text;

  friend bool operator==(const PictureRef&, const PictureRef&) = default;
};

struct Proposition {
  std::string proposition_id;
  std::string title;
  std::optional<std::string> personalized_explanation;
  bool validity = false;

  friend bool operator==(const Proposition&, const Proposition&) = default;
};

struct Question {
  std::string question_id;
  std::string title;
  std::vector<Proposition> propositions;
  std::string explanation;

  friend bool operator==(const Question&, const Question&) = default;
};

struct Quiz {
  std::vector<Question> questions;

  const Question* find(std::string_view question_id) const;
  friend bool operator==(const Quiz&, const Quiz&) = default;
};

struct Tag {
  std::int64_t number = 0;
  std::string text;
  double coord_h = 0.0;  // fraction of picture width
  double coord_v = 0.0;  // fraction of picture height

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct LessonPage {
  std::string page_id;
  std::string title;
  std::string text;
  std::optional<PictureRef> picture;
  std::optional<std::string> caption;
  std::vector<Tag> tags;
  std::vector<std::string> linked_question_ids;

  friend bool operator==(const LessonPage&, const LessonPage&) = default;
};

struct Lesson {
  std::vector<LessonPage> pages;

  friend bool operator==(const Lesson&, const Lesson&) = default;
};

struct MemoTriplet {
  PictureRef picture;
  std::string title;
  std::string definition;

  friend bool operator==(const MemoTriplet&, const MemoTriplet&) = default;
};

struct MemoSet {
  std::vector<MemoTriplet> triplets;
  // Kept as a list so that malformed input (duplicates, too many modes) can
  // be represented and reported by validation.
  std::vector<MemoMode> enabled_modes;

  bool is_enabled(MemoMode mode) const;
  friend bool operator==(const MemoSet&, const MemoSet&) = default;
};

struct AssociationCategory {
  std::string category_id;
  std::string title;
  PictureRef picture;

  friend bool operator==(const AssociationCategory&, const AssociationCategory&) = default;
};

struct AssociationProposition {
  std::string proposition_id;
  std::string title;
  std::string category_id;
  std::optional<std::string> personalized_explanation;

  friend bool operator==(const AssociationProposition&, const AssociationProposition&) = default;
};

struct AssociationGame {
  std::vector<AssociationCategory> categories;
  std::vector<AssociationProposition> propositions;

  friend bool operator==(const AssociationGame&, const AssociationGame&) = default;
};

struct VideoLink {
  std::string url;
  std::string title;

  friend bool operator==(const VideoLink&, const VideoLink&) = default;
};

// Built-in interactives that can only be referenced, not authored.
struct CycleGameRef {
  std::string ref_id;
  std::string title;

  friend bool operator==(const CycleGameRef&, const CycleGameRef&) = default;
};

struct ExperimentRef {
  std::string ref_id;
  std::string title;

  friend bool operator==(const ExperimentRef&, const ExperimentRef&) = default;
};

struct PedagogicalSupport {
  std::string body;

  friend bool operator==(const PedagogicalSupport&, const PedagogicalSupport&) = default;
};

using ResourceDocument = std::variant<Lesson, Quiz, MemoSet, AssociationGame, CycleGameRef,
                                      ExperimentRef, VideoLink, PedagogicalSupport>;

ResourceKind kind_of(const ResourceDocument& document) noexcept;

struct ModuleDescriptor {
  std::string module_id;
  ElementCategory category = ElementCategory::Water;
  std::string source_locale;
  std::string title;
  std::map<ResourceKind, ResourceDocument> resources;

  template <typename T>
  const T* get() const {
    for (const auto& [kind, document] : resources) {
      if (const auto* typed = std::get_if<T>(&document)) return typed;
    }
    return nullptr;
  }

  friend bool operator==(const ModuleDescriptor&, const ModuleDescriptor&) = default;
};

/// Lesson, quiz, association, cycle game, experiment and video count one
/// each, the memo set counts one per enabled mode, pedagogical support is
/// teacher metadata and is not counted.
std::size_t count_playable_resources(const ModuleDescriptor& module);

/// Questions linked from `page`, in link order. Throws
/// Error(UnresolvedLink) when a link does not resolve in `quiz`.
std::vector<Question> page_question_pool(const LessonPage& page, const Quiz& quiz);

}  // namespace saphir
