#include "saphir/validation.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "saphir/catalog.hpp"

namespace saphir {

namespace {

constexpr std::pair<ViolationCode, std::string_view> kCodeNames[] = {
    {ViolationCode::PropositionCount, "PROPOSITION_COUNT"},
    {ViolationCode::NoValidProposition, "NO_VALID_PROPOSITION"},
    {ViolationCode::QuestionCount, "QUESTION_COUNT"},
    {ViolationCode::PageCount, "PAGE_COUNT"},
    {ViolationCode::MemoTripletCount, "MEMO_TRIPLET_COUNT"},
    {ViolationCode::MemoModeCount, "MEMO_MODE_COUNT"},
    {ViolationCode::CategoryCount, "CATEGORY_COUNT"},
    {ViolationCode::CategoryUnresolved, "CATEGORY_UNRESOLVED"},
    {ViolationCode::CategoryUnused, "CATEGORY_UNUSED"},
    {ViolationCode::AssociationPropositionCount, "ASSOCIATION_PROPOSITION_COUNT"},
    {ViolationCode::PageLinkUnresolved, "PAGE_LINK_UNRESOLVED"},
    {ViolationCode::PageLinkExceedsN, "PAGE_LINK_EXCEEDS_N"},
    {ViolationCode::TagCoordRange, "TAG_COORD_RANGE"},
    {ViolationCode::TagNumbering, "TAG_NUMBERING"},
    {ViolationCode::CaptionWithoutPicture, "CAPTION_WITHOUT_PICTURE"},
    {ViolationCode::EmptyField, "EMPTY_FIELD"},
    {ViolationCode::ResourceCountExceeded, "RESOURCE_COUNT_EXCEEDED"},
    {ViolationCode::DuplicateId, "DUPLICATE_ID"},
    {ViolationCode::EmptyModule, "EMPTY_MODULE"},
    {ViolationCode::InvalidIdentifier, "INVALID_IDENTIFIER"},
    {ViolationCode::InvalidUrl, "INVALID_URL"},
    {ViolationCode::InvalidLanguage, "INVALID_LANGUAGE"},
    {ViolationCode::UndeclaredLanguage, "UNDECLARED_LANGUAGE"},
    {ViolationCode::KindMismatch, "KIND_MISMATCH"},
    {ViolationCode::VariantUnknownModule, "VARIANT_UNKNOWN_MODULE"},
    {ViolationCode::VariantUnknownResource, "VARIANT_UNKNOWN_RESOURCE"},
    {ViolationCode::VariantSourceLocale, "VARIANT_SOURCE_LOCALE"},
    {ViolationCode::AssetUnresolved, "ASSET_UNRESOLVED"},
};

// Collects violations under a fixed subject.
class Collector {
public:
  explicit Collector(Path subject) { report_.subject = std::move(subject); }

  void add(ViolationCode code, Path path, std::string message) {
    report_.violations.push_back({code, std::move(path), std::move(message)});
  }

  void require_text(const std::string& value, const Path& owner, const char* field) {
    if (is_blank(value)) add(ViolationCode::EmptyField, owner / field, std::string(field) + " is blank");
  }

  void require_optional_text(const std::optional<std::string>& value, const Path& owner,
                             const char* field) {
    if (value) require_text(*value, owner, field);
  }

  void picture(const PictureRef& picture, const Path& owner) {
    Path at = owner / "picture";
    require_text(picture.asset_id, at, "asset_id");
    require_text(picture.alt_text, at, "alt_text");
  }

  void merge(ValidationReport other) { report_.merge(std::move(other)); }

  ValidationReport take() { return std::move(report_); }

private:
  ValidationReport report_;
};

// Element locator: the element's id when it has one, its position otherwise.
Path element(const Path& parent, std::string_view list, std::size_t index, const std::string& id) {
  return is_blank(id) ? parent.indexed(list, index) : parent / id;
}

// Reports blank and repeated ids among `ids`, located at the elements.
void check_ids(Collector& out, const Path& parent, std::string_view list, const char* field,
               const std::vector<std::string>& ids) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Path at = element(parent, list, i, ids[i]);
    if (is_blank(ids[i])) {
      out.add(ViolationCode::EmptyField, at / field, std::string(field) + " is blank");
    } else if (!seen.insert(ids[i]).second) {
      out.add(ViolationCode::DuplicateId, parent.indexed(list, i),
              "duplicate " + std::string(field) + " '" + ids[i] + "'");
    }
  }
}

bool in_unit_interval(double value) { return std::isfinite(value) && value >= 0.0 && value <= 1.0; }

bool is_absolute_url(const std::string& url) {
  static const std::regex pattern(R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s/?#]+([/?#]\S*)?)");
  return std::regex_match(url, pattern);
}

void question_rules(Collector& out, const Question& question, const Path& at) {
  out.require_text(question.title, at, "title");
  out.require_text(question.explanation, at, "explanation");
  const std::size_t m = question.propositions.size();
  if (m < kMinPropositions || m > kMaxPropositions) {
    out.add(ViolationCode::PropositionCount, at,
            "question has " + std::to_string(m) + " propositions, expected 2 to 10");
  }
  if (std::none_of(question.propositions.begin(), question.propositions.end(),
                   [](const Proposition& p) { return p.validity; })) {
    out.add(ViolationCode::NoValidProposition, at, "no proposition is marked valid");
  }
  std::vector<std::string> ids;
  for (const auto& p : question.propositions) ids.push_back(p.proposition_id);
  check_ids(out, at, "propositions", "proposition_id", ids);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = question.propositions[i];
    Path p_at = element(at, "propositions", i, p.proposition_id);
    out.require_text(p.title, p_at, "title");
    out.require_optional_text(p.personalized_explanation, p_at, "personalized_explanation");
  }
}

void quiz_rules(Collector& out, const Quiz& quiz, const Path& at) {
  if (quiz.questions.empty()) out.add(ViolationCode::QuestionCount, at, "quiz has no question");
  std::vector<std::string> ids;
  for (const auto& q : quiz.questions) ids.push_back(q.question_id);
  check_ids(out, at, "questions", "question_id", ids);
  for (std::size_t i = 0; i < quiz.questions.size(); ++i) {
    const auto& q = quiz.questions[i];
    question_rules(out, q, element(at, "questions", i, q.question_id));
  }
}

void page_rules(Collector& out, const LessonPage& page, const Path& at, const Quiz* quiz) {
  out.require_text(page.title, at, "title");
  if (page.picture) {
    out.picture(*page.picture, at);
  } else {
    if (page.caption) {
      out.add(ViolationCode::CaptionWithoutPicture, at / "caption", "caption without picture");
    }
    if (!page.tags.empty()) {
      out.add(ViolationCode::CaptionWithoutPicture, at / "tags", "tags without picture");
    }
  }
  out.require_optional_text(page.caption, at, "caption");

  for (std::size_t i = 0; i < page.tags.size(); ++i) {
    const Tag& tag = page.tags[i];
    Path tag_at = at.indexed("tags", i);
    if (!in_unit_interval(tag.coord_h) || !in_unit_interval(tag.coord_v)) {
      out.add(ViolationCode::TagCoordRange, tag_at, "tag coordinates must lie in [0,1]");
    }
    if (tag.number != static_cast<std::int64_t>(i) + 1) {
      out.add(ViolationCode::TagNumbering, tag_at,
              "tag number " + std::to_string(tag.number) + ", expected " + std::to_string(i + 1));
    }
    out.require_text(tag.text, tag_at, "text");
  }

  const auto& links = page.linked_question_ids;
  if (quiz != nullptr && links.size() > quiz->questions.size()) {
    out.add(ViolationCode::PageLinkExceedsN, at / "linked_question_ids",
            "page links " + std::to_string(links.size()) + " questions, quiz has " +
                std::to_string(quiz->questions.size()));
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < links.size(); ++i) {
    Path link_at = at.indexed("linked_question_ids", i);
    if (!seen.insert(links[i]).second) {
      out.add(ViolationCode::DuplicateId, link_at, "question '" + links[i] + "' linked twice");
    }
    if (quiz == nullptr) {
      out.add(ViolationCode::PageLinkUnresolved, link_at,
              "page links question '" + links[i] + "' but the module has no quiz");
    } else if (quiz->find(links[i]) == nullptr) {
      out.add(ViolationCode::PageLinkUnresolved, link_at,
              "question '" + links[i] + "' is not in the quiz");
    }
  }
}

void lesson_rules(Collector& out, const Lesson& lesson, const Quiz* quiz, const Path& at) {
  if (lesson.pages.empty()) out.add(ViolationCode::PageCount, at, "lesson has no page");
  std::vector<std::string> ids;
  for (const auto& page : lesson.pages) ids.push_back(page.page_id);
  check_ids(out, at, "pages", "page_id", ids);
  for (std::size_t i = 0; i < lesson.pages.size(); ++i) {
    const auto& page = lesson.pages[i];
    page_rules(out, page, element(at, "pages", i, page.page_id), quiz);
  }
}

void memo_rules(Collector& out, const MemoSet& memo, const Path& at) {
  if (memo.triplets.size() != kMemoTriplets) {
    out.add(ViolationCode::MemoTripletCount, at,
            "memo set has " + std::to_string(memo.triplets.size()) + " triplets, expected 6");
  }
  const std::size_t modes = memo.enabled_modes.size();
  if (modes < 1 || modes > 3) {
    out.add(ViolationCode::MemoModeCount, at / "enabled_modes",
            "memo set enables " + std::to_string(modes) + " modes, expected 1 to 3");
  }
  std::set<MemoMode> seen_modes;
  for (std::size_t i = 0; i < modes; ++i) {
    if (!seen_modes.insert(memo.enabled_modes[i]).second) {
      out.add(ViolationCode::DuplicateId, at.indexed("enabled_modes", i),
              "mode '" + std::string(to_string(memo.enabled_modes[i])) + "' enabled twice");
    }
  }
  std::set<std::string> titles;
  for (std::size_t i = 0; i < memo.triplets.size(); ++i) {
    const auto& t = memo.triplets[i];
    Path t_at = at.indexed("triplets", i);
    out.picture(t.picture, t_at);
    out.require_text(t.title, t_at, "title");
    out.require_text(t.definition, t_at, "definition");
    if (!is_blank(t.title) && !titles.insert(t.title).second) {
      out.add(ViolationCode::DuplicateId, t_at, "triplet title '" + t.title + "' repeated");
    }
  }
}

void association_rules(Collector& out, const AssociationGame& game, const Path& at) {
  if (game.categories.size() != kAssociationCategories) {
    out.add(ViolationCode::CategoryCount, at,
            "association game has " + std::to_string(game.categories.size()) +
                " categories, expected 2");
  }
  if (game.propositions.size() < kMinAssociationPropositions) {
    out.add(ViolationCode::AssociationPropositionCount, at,
            "association game needs at least 2 propositions");
  }
  std::vector<std::string> category_ids;
  for (const auto& c : game.categories) category_ids.push_back(c.category_id);
  check_ids(out, at, "categories", "category_id", category_ids);
  for (std::size_t i = 0; i < game.categories.size(); ++i) {
    const auto& c = game.categories[i];
    Path c_at = element(at, "categories", i, c.category_id);
    out.require_text(c.title, c_at, "title");
    out.picture(c.picture, c_at);
  }

  std::vector<std::string> ids;
  for (const auto& p : game.propositions) ids.push_back(p.proposition_id);
  check_ids(out, at, "propositions", "proposition_id", ids);
  std::map<std::string, std::size_t> uses;
  for (const auto& id : category_ids) uses[id] = 0;
  for (std::size_t i = 0; i < game.propositions.size(); ++i) {
    const auto& p = game.propositions[i];
    Path p_at = element(at, "propositions", i, p.proposition_id);
    out.require_text(p.title, p_at, "title");
    out.require_optional_text(p.personalized_explanation, p_at, "personalized_explanation");
    auto it = uses.find(p.category_id);
    if (it == uses.end()) {
      out.add(ViolationCode::CategoryUnresolved, p_at / "category_id",
              "unknown category '" + p.category_id + "'");
    } else {
      ++it->second;
    }
  }
  for (std::size_t i = 0; i < game.categories.size(); ++i) {
    const auto& c = game.categories[i];
    if (!is_blank(c.category_id) && uses[c.category_id] == 0) {
      out.add(ViolationCode::CategoryUnused, element(at, "categories", i, c.category_id),
              "no proposition belongs to category '" + c.category_id + "'");
    }
  }
}

void video_rules(Collector& out, const VideoLink& video, const Path& at) {
  if (!is_absolute_url(video.url)) {
    out.add(ViolationCode::InvalidUrl, at / "url", "'" + video.url + "' is not an absolute URL");
  }
  out.require_text(video.title, at, "title");
}

void document_rules(Collector& out, const ResourceDocument& document, const Quiz* quiz,
                    const Path& at) {
  std::visit(
      [&](const auto& doc) {
        using T = std::decay_t<decltype(doc)>;
        if constexpr (std::is_same_v<T, Lesson>) {
          lesson_rules(out, doc, quiz, at);
        } else if constexpr (std::is_same_v<T, Quiz>) {
          quiz_rules(out, doc, at);
        } else if constexpr (std::is_same_v<T, MemoSet>) {
          memo_rules(out, doc, at);
        } else if constexpr (std::is_same_v<T, AssociationGame>) {
          association_rules(out, doc, at);
        } else if constexpr (std::is_same_v<T, VideoLink>) {
          video_rules(out, doc, at);
        } else if constexpr (std::is_same_v<T, PedagogicalSupport>) {
          out.require_text(doc.body, at, "body");
        } else {
          out.require_text(doc.ref_id, at, "ref_id");
          out.require_text(doc.title, at, "title");
        }
      },
      document);
}

void module_rules(Collector& out, const ModuleDescriptor& module, const Path& at) {
  if (!is_well_formed_module_id(module.module_id)) {
    out.add(ViolationCode::InvalidIdentifier, at / "module_id",
            "module id '" + module.module_id + "' is not a valid identifier");
  }
  out.require_text(module.title, at, "title");
  if (!is_well_formed_language_code(module.source_locale)) {
    out.add(ViolationCode::InvalidLanguage, at / "source_locale",
            "malformed source locale '" + module.source_locale + "'");
  }
  if (module.resources.empty()) out.add(ViolationCode::EmptyModule, at, "module has no resource");

  const Quiz* quiz = module.get<Quiz>();
  for (const auto& [kind, document] : module.resources) {
    Path r_at = at / std::string(to_string(kind));
    if (kind_of(document) != kind) {
      out.add(ViolationCode::KindMismatch, r_at,
              "slot holds a " + std::string(to_string(kind_of(document))) + " document");
      continue;
    }
    document_rules(out, document, quiz, r_at);
  }
  const std::size_t playable = count_playable_resources(module);
  if (playable > kMaxPlayableResources) {
    out.add(ViolationCode::ResourceCountExceeded, at,
            "module has " + std::to_string(playable) + " playable resources, at most 9 allowed");
  }
}

// The quiz a learner in `locale` is served: its Complete variant, else the
// source quiz.
const Quiz* served_quiz(const Catalog& catalog, const ModuleDescriptor& module,
                        const std::string& locale) {
  auto it = catalog.variants.find({module.module_id, ResourceKind::Quiz, locale});
  if (it != catalog.variants.end() && it->second.status == VariantStatus::Complete) {
    if (const auto* quiz = std::get_if<Quiz>(&it->second.document)) return quiz;
  }
  return module.get<Quiz>();
}

void asset_refs(Collector& out, const Catalog& catalog, const ResourceDocument& document,
                const Path& at) {
  for (const PictureRef* picture : pictures_of(document)) {
    if (!is_blank(picture->asset_id) && catalog.assets.count(picture->asset_id) == 0) {
      out.add(ViolationCode::AssetUnresolved, at / picture->asset_id,
              "asset '" + picture->asset_id + "' is not in the pack");
    }
  }
}

}  // namespace

std::string_view to_string(ViolationCode code) noexcept {
  for (const auto& [c, name] : kCodeNames) {
    if (c == code) return name;
  }
  return "UNKNOWN";
}

std::optional<ViolationCode> parse_violation_code(std::string_view text) {
  for (const auto& [c, name] : kCodeNames) {
    if (name == text) return c;
  }
  return std::nullopt;
}

Path Path::operator/(std::string segment) const {
  Path out = *this;
  out.segments_.push_back(std::move(segment));
  return out;
}

Path Path::indexed(std::string_view name, std::size_t index) const {
  return *this / (std::string(name) + "[" + std::to_string(index) + "]");
}

bool Path::starts_with(const Path& prefix) const {
  return prefix.segments_.size() <= segments_.size() &&
         std::equal(prefix.segments_.begin(), prefix.segments_.end(), segments_.begin());
}

std::string Path::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i > 0) out += '/';
    out += segments_[i];
  }
  return out;
}

bool ValidationReport::has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

void ValidationReport::merge(ValidationReport other) {
  for (auto& v : other.violations) violations.push_back(std::move(v));
}

Json to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"code", std::string(to_string(v.code))},
                          {"path", v.path.str()},
                          {"message", v.message}});
  }
  return {{"subject", report.subject.str()},
          {"is_valid", report.is_valid()},
          {"violations", std::move(violations)}};
}

ValidationReport validate_question(const Question& question, const Path& at) {
  Path q_at = is_blank(question.question_id) ? at : at / question.question_id;
  Collector out(q_at);
  if (is_blank(question.question_id)) {
    out.add(ViolationCode::EmptyField, q_at / "question_id", "question_id is blank");
  }
  question_rules(out, question, q_at);
  return out.take();
}

ValidationReport validate_quiz(const Quiz& quiz, const Path& at) {
  Collector out(at);
  quiz_rules(out, quiz, at);
  return out.take();
}

ValidationReport validate_lesson(const Lesson& lesson, const Quiz* quiz, const Path& at) {
  Collector out(at);
  lesson_rules(out, lesson, quiz, at);
  return out.take();
}

ValidationReport validate_memo_set(const MemoSet& memo, const Path& at) {
  Collector out(at);
  memo_rules(out, memo, at);
  return out.take();
}

ValidationReport validate_association(const AssociationGame& game, const Path& at) {
  Collector out(at);
  association_rules(out, game, at);
  return out.take();
}

ValidationReport validate_video(const VideoLink& video, const Path& at) {
  Collector out(at);
  video_rules(out, video, at);
  return out.take();
}

ValidationReport validate_document(const ResourceDocument& document, const Quiz* quiz,
                                   const Path& at) {
  Collector out(at);
  document_rules(out, document, quiz, at);
  return out.take();
}

ValidationReport validate_module(const ModuleDescriptor& module) {
  Path at{{module.module_id}};
  Collector out(at);
  module_rules(out, module, at);
  return out.take();
}

ValidationReport validate_pack(const ContentPack& pack) {
  const Catalog& catalog = pack.catalog;
  Collector out(Path{{"pack"}});

  Path languages_at{{"languages"}};
  for (std::size_t i = 0; i < catalog.languages.list().size(); ++i) {
    const auto& language = catalog.languages.list()[i];
    Path l_at = languages_at / language.code;
    if (!is_well_formed_language_code(language.code)) {
      out.add(ViolationCode::InvalidLanguage, languages_at.indexed("languages", i),
              "malformed language code '" + language.code + "'");
    }
    out.require_text(language.display_name, l_at, "display_name");
  }

  for (const auto& [id, module] : catalog.modules) {
    Path m_at{{module.module_id}};
    if (id != module.module_id) {
      out.add(ViolationCode::InvalidIdentifier, m_at, "module stored under id '" + id + "'");
    }
    out.merge(validate_module(module));
    if (!catalog.languages.contains(module.source_locale)) {
      out.add(ViolationCode::UndeclaredLanguage, m_at / "source_locale",
              "source locale '" + module.source_locale + "' is not declared");
    }
    for (const auto& [kind, document] : module.resources) {
      asset_refs(out, catalog, document, m_at / std::string(to_string(kind)));
    }
  }

  for (const auto& [key, variant] : catalog.variants) {
    Path v_at{{key.module_id, std::string(to_string(key.kind)) + "@" + key.locale}};
    if (variant.key() != key) {
      out.add(ViolationCode::InvalidIdentifier, v_at, "variant stored under another key");
    }
    if (!catalog.languages.contains(key.locale)) {
      out.add(ViolationCode::UndeclaredLanguage, v_at,
              "variant language '" + key.locale + "' is not declared");
    }
    if (kind_of(variant.document) != key.kind) {
      out.add(ViolationCode::KindMismatch, v_at,
              "variant holds a " + std::string(to_string(kind_of(variant.document))) + " document");
      continue;
    }
    const ModuleDescriptor* module = catalog.find_module(key.module_id);
    if (module == nullptr) {
      out.add(ViolationCode::VariantUnknownModule, v_at,
              "variant of unknown module '" + key.module_id + "'");
      continue;
    }
    if (module->resources.count(key.kind) == 0) {
      out.add(ViolationCode::VariantUnknownResource, v_at,
              "module has no source " + std::string(to_string(key.kind)));
      continue;
    }
    if (key.locale == module->source_locale) {
      out.add(ViolationCode::VariantSourceLocale, v_at, "variant in the module's source locale");
    }
    if (variant.status == VariantStatus::Complete) {
      document_rules(out, variant.document, served_quiz(catalog, *module, key.locale), v_at);
      asset_refs(out, catalog, variant.document, v_at);
      if (variant.module_title) out.require_text(*variant.module_title, v_at, "module_title");
    }
  }

  for (const auto& [id, asset] : catalog.assets) {
    if (asset.asset_id != id || content_hash(asset.bytes) != id) {
      out.add(ViolationCode::AssetUnresolved, Path{{"assets", id}},
              "asset content does not match its id");
    }
  }
  return out.take();
}

std::vector<const PictureRef*> pictures_of(const ResourceDocument& document) {
  std::vector<const PictureRef*> out;
  if (const auto* lesson = std::get_if<Lesson>(&document)) {
    for (const auto& page : lesson->pages) {
      if (page.picture) out.push_back(&*page.picture);
    }
  } else if (const auto* memo = std::get_if<MemoSet>(&document)) {
    for (const auto& t : memo->triplets) out.push_back(&t.picture);
  } else if (const auto* game = std::get_if<AssociationGame>(&document)) {
    for (const auto& c : game->categories) out.push_back(&c.picture);
  }
  return out;
}

}  // namespace saphir
