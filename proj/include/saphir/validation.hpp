#pragma once

// Structural validation of resources, modules and packs. Every problem is
// reported; nothing is thrown. Violation codes are part of the public wire
// contract.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saphir/model.hpp"
#include "saphir/serialization.hpp"

namespace saphir {

struct ContentPack;

enum class ViolationCode {
  PropositionCount,
  NoValidProposition,
  QuestionCount,
  PageCount,
  MemoTripletCount,
  MemoModeCount,
  CategoryCount,
  CategoryUnresolved,
  CategoryUnused,
  AssociationPropositionCount,
  PageLinkUnresolved,
  PageLinkExceedsN,
  TagCoordRange,
  TagNumbering,
  CaptionWithoutPicture,
  EmptyField,
  ResourceCountExceeded,
  DuplicateId,
  EmptyModule,
  InvalidIdentifier,
  InvalidUrl,
  InvalidLanguage,
  UndeclaredLanguage,
  KindMismatch,
  VariantUnknownModule,
  VariantUnknownResource,
  VariantSourceLocale,
  AssetUnresolved,
};

std::string_view to_string(ViolationCode code) noexcept;
std::optional<ViolationCode> parse_violation_code(std::string_view text);

/// Locator: module id, resource kind, then element ids (or "name[i]" for
/// elements without an id), optionally ending in a field name.
class Path {
public:
  Path() = default;
  explicit Path(std::vector<std::string> segments) : segments_(std::move(segments)) {}

  Path operator/(std::string segment) const;
  Path indexed(std::string_view name, std::size_t index) const;

  const std::vector<std::string>& segments() const noexcept { return segments_; }
  bool starts_with(const Path& prefix) const;
  std::string str() const;

  friend bool operator==(const Path&, const Path&) = default;

private:
  std::vector<std::string> segments_;
};

struct Violation {
  ViolationCode code;
  Path path;
  std::string message;
};

struct ValidationReport {
  Path subject;
  std::vector<Violation> violations;

  bool is_valid() const noexcept { return violations.empty(); }
  bool has(ViolationCode code) const;
  void merge(ValidationReport other);
};

Json to_json(const ValidationReport& report);

ValidationReport validate_question(const Question& question, const Path& at = {});
ValidationReport validate_quiz(const Quiz& quiz, const Path& at = {});
/// `quiz` is the module's quiz when it has one; links are checked against it.
ValidationReport validate_lesson(const Lesson& lesson, const Quiz* quiz, const Path& at = {});
ValidationReport validate_memo_set(const MemoSet& memo, const Path& at = {});
ValidationReport validate_association(const AssociationGame& game, const Path& at = {});
ValidationReport validate_video(const VideoLink& video, const Path& at = {});

/// Validates one document in isolation. Lessons are checked against `quiz`.
ValidationReport validate_document(const ResourceDocument& document, const Quiz* quiz,
                                   const Path& at = {});

ValidationReport validate_module(const ModuleDescriptor& module);

/// Modules and Complete variants against the same structural rules, plus
/// cross references: declared languages, variant targets, asset ids.
ValidationReport validate_pack(const ContentPack& pack);

/// Every PictureRef in a document, in document order.
std::vector<const PictureRef*> pictures_of(const ResourceDocument& document);

}  // namespace saphir
