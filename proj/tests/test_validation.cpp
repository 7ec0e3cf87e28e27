#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "generators.hpp"
#include "saphir/catalog.hpp"
#include "saphir/pack.hpp"
#include "saphir/sample.hpp"
#include "saphir/validation.hpp"

using namespace saphir;
using namespace saphir::testing;

namespace {

// Path of the first violation with `code`, or "" when there is none.
std::string path_of(const ValidationReport& report, ViolationCode code) {
  for (const auto& v : report.violations) {
    if (v.code == code) return v.path.str();
  }
  return "";
}

Quiz& quiz_in(ModuleDescriptor& m) { return std::get<Quiz>(m.resources.at(ResourceKind::Quiz)); }
Lesson& lesson_in(ModuleDescriptor& m) { return std::get<Lesson>(m.resources.at(ResourceKind::Lesson)); }

ContentPack pack_of(Catalog catalog) {
  ContentPack pack;
  pack.catalog = std::move(catalog);
  return pack;
}

Catalog catalog_with(const ModuleDescriptor& m) {
  Catalog c;
  c.languages.add({"en", "English"});
  const std::string id = content_hash("x");
  c.assets[id] = Asset{id, "image/png", "x"};
  c.modules[m.module_id] = with_asset(m, id);
  return c;
}

}  // namespace

TEST(ValidateQuestion, OnePropositionIsCountViolation) {
  auto report = validate_question(simple_question("q1", 1));
  EXPECT_TRUE(report.has(ViolationCode::PropositionCount));
}

TEST(ValidateQuestion, FourPropositionsOneValidIsValid) {
  EXPECT_TRUE(validate_question(simple_question("q1", 4)).is_valid());
}

TEST(ValidateQuestion, ElevenPropositionsIsCountViolation) {
  EXPECT_TRUE(validate_question(simple_question("q1", 11)).has(ViolationCode::PropositionCount));
}

TEST(ValidateQuestion, BoundariesTwoAndTen) {
  EXPECT_TRUE(validate_question(simple_question("q1", 2)).is_valid());
  EXPECT_TRUE(validate_question(simple_question("q1", 10)).is_valid());
}

TEST(ValidateQuestion, NoValidProposition) {
  Question q = simple_question("q1", 3);
  q.propositions[0].validity = false;
  EXPECT_TRUE(validate_question(q).has(ViolationCode::NoValidProposition));
}

TEST(ValidateQuestion, SeveralValidPropositionsAllowed) {
  Question q = simple_question("q1", 3);
  q.propositions[1].validity = true;
  EXPECT_TRUE(validate_question(q).is_valid());
}

TEST(ValidateQuestion, BlankTitlesAndDuplicateIds) {
  Question q = simple_question("q1", 3);
  q.title = "  ";
  q.propositions[1].title = "";
  q.propositions[2].proposition_id = "a";
  auto report = validate_question(q);
  EXPECT_EQ(path_of(report, ViolationCode::EmptyField), "q1/title");
  EXPECT_EQ(path_of(report, ViolationCode::DuplicateId), "q1/propositions[2]");
  EXPECT_EQ(std::count_if(report.violations.begin(), report.violations.end(),
                          [](const Violation& v) { return v.code == ViolationCode::EmptyField; }),
            2);
}

TEST(ValidateLesson, ThreeOfFiveLinksIsValid) {
  Quiz quiz = quiz_of(5);
  Lesson lesson{{simple_page("p1", {"q1", "q3", "q5"})}};
  EXPECT_TRUE(validate_lesson(lesson, &quiz).is_valid());
}

TEST(ValidateLesson, LinksWithoutQuizAreUnresolved) {
  Lesson lesson{{simple_page("p1", {"q1", "q2"})}};
  auto report = validate_lesson(lesson, nullptr, Path{{"m", "lesson"}});
  EXPECT_TRUE(report.has(ViolationCode::PageLinkUnresolved));
  EXPECT_EQ(path_of(report, ViolationCode::PageLinkUnresolved), "m/lesson/p1/linked_question_ids[0]");
}

TEST(ValidateLesson, TagOutOfRange) {
  Lesson lesson{{pictured_page("p1", 2)}};
  lesson.pages[0].tags[1].coord_h = 1.2;
  auto report = validate_lesson(lesson, nullptr, Path{{"m", "lesson"}});
  EXPECT_EQ(path_of(report, ViolationCode::TagCoordRange), "m/lesson/p1/tags[1]");
}

TEST(ValidateLesson, TagEdgesAndNonFinite) {
  Lesson lesson{{pictured_page("p1", 3)}};
  lesson.pages[0].tags[0].coord_h = 0.0;
  lesson.pages[0].tags[0].coord_v = 1.0;
  EXPECT_TRUE(validate_lesson(lesson, nullptr).is_valid());
  lesson.pages[0].tags[1].coord_v = std::numeric_limits<double>::quiet_NaN();
  lesson.pages[0].tags[2].coord_h = -0.0001;
  auto report = validate_lesson(lesson, nullptr);
  EXPECT_EQ(std::count_if(report.violations.begin(), report.violations.end(),
                          [](const Violation& v) { return v.code == ViolationCode::TagCoordRange; }),
            2);
}

TEST(ValidateLesson, CaptionOrTagsWithoutPicture) {
  Lesson lesson{{pictured_page("p1", 1)}};
  lesson.pages[0].picture.reset();
  auto report = validate_lesson(lesson, nullptr);
  EXPECT_EQ(path_of(report, ViolationCode::CaptionWithoutPicture), "p1/caption");
  EXPECT_EQ(report.violations.size(), 2u);
}

TEST(ValidateLesson, MoreLinksThanQuestions) {
  Quiz quiz = quiz_of(2);
  Lesson lesson{{simple_page("p1", {"q1", "q2", "q3"})}};
  auto report = validate_lesson(lesson, &quiz);
  EXPECT_EQ(path_of(report, ViolationCode::PageLinkExceedsN), "p1/linked_question_ids");
  EXPECT_EQ(path_of(report, ViolationCode::PageLinkUnresolved), "p1/linked_question_ids[2]");
}

TEST(ValidateLesson, TagNumberingMustBeConsecutive) {
  Lesson lesson{{pictured_page("p1", 2)}};
  lesson.pages[0].tags[1].number = 5;
  EXPECT_EQ(path_of(validate_lesson(lesson, nullptr), ViolationCode::TagNumbering), "p1/tags[1]");
}

TEST(ValidateMemo, SixTripletsOneModeIsValid) {
  EXPECT_TRUE(validate_memo_set(memo_of({MemoMode::Classical})).is_valid());
}

TEST(ValidateMemo, FiveTriplets) {
  MemoSet memo = memo_of();
  memo.triplets.pop_back();
  EXPECT_TRUE(validate_memo_set(memo).has(ViolationCode::MemoTripletCount));
}

TEST(ValidateMemo, EmptyDefinition) {
  MemoSet memo = memo_of();
  memo.triplets[3].definition = "";
  EXPECT_EQ(path_of(validate_memo_set(memo, Path{{"m", "memo_set"}}), ViolationCode::EmptyField),
            "m/memo_set/triplets[3]/definition");
}

TEST(ValidateMemo, ModeSetEmptyOrRepeated) {
  EXPECT_TRUE(validate_memo_set(memo_of({})).has(ViolationCode::MemoModeCount));
  EXPECT_TRUE(validate_memo_set(memo_of({MemoMode::Easy, MemoMode::Easy})).has(ViolationCode::DuplicateId));
}

TEST(ValidateAssociation, TwoCategoriesThreeEachIsValid) {
  EXPECT_TRUE(validate_association(association_of(3)).is_valid());
}

TEST(ValidateAssociation, ThreeCategories) {
  AssociationGame game = association_of(3);
  game.categories.push_back({"C", "Category C", PictureRef{kAsset, "C"}});
  game.propositions.push_back({"p9", "Item 9", "C", std::nullopt});
  EXPECT_TRUE(validate_association(game).has(ViolationCode::CategoryCount));
}

TEST(ValidateAssociation, UnknownCategoryReference) {
  AssociationGame game = association_of(3);
  game.propositions[2].category_id = "Z";
  auto report = validate_association(game);
  EXPECT_EQ(path_of(report, ViolationCode::CategoryUnresolved), "p3/category_id");
}

TEST(ValidateAssociation, UnusedCategory) {
  AssociationGame game = association_of(3);
  for (auto& p : game.propositions) p.category_id = "A";
  EXPECT_EQ(path_of(validate_association(game), ViolationCode::CategoryUnused), "B");
}

TEST(ValidateVideo, UrlMustBeAbsolute) {
  EXPECT_TRUE(validate_video({"https://example.org/v?id=1", "t"}).is_valid());
  EXPECT_TRUE(validate_video({"example.org/v", "t"}).has(ViolationCode::InvalidUrl));
  EXPECT_TRUE(validate_video({"https://exa mple.org", "t"}).has(ViolationCode::InvalidUrl));
}

TEST(ValidateModule, FullModuleIsValid) {
  auto report = validate_module(full_module());
  EXPECT_TRUE(report.is_valid());
  EXPECT_TRUE(report.violations.empty());
}

TEST(ValidateModule, NestedViolationHasFullPath) {
  ModuleDescriptor m = full_module("m1");
  quiz_in(m).questions[2].propositions.resize(1);
  auto report = validate_module(m);
  EXPECT_EQ(path_of(report, ViolationCode::PropositionCount), "m1/quiz/q3");
}

TEST(ValidateModule, NoResources) {
  ModuleDescriptor m = full_module();
  m.resources.clear();
  EXPECT_TRUE(validate_module(m).has(ViolationCode::EmptyModule));
}

TEST(ValidateModule, PedagogicalSupportMustNotBeBlank) {
  ModuleDescriptor m = full_module("m1");
  m.resources[ResourceKind::PedagogicalSupport] = PedagogicalSupport{" "};
  EXPECT_EQ(path_of(validate_module(m), ViolationCode::EmptyField), "m1/pedagogical_support/body");
}

TEST(ValidateModule, ResourceCountBound) {
  // Nine is the maximum a module can hold by construction: every kind plus
  // three memo modes.
  EXPECT_EQ(count_playable_resources(full_module()), 9u);
  EXPECT_FALSE(validate_module(full_module()).has(ViolationCode::ResourceCountExceeded));
  // A malformed memo set with four modes pushes the count to ten.
  ModuleDescriptor m = full_module();
  std::get<MemoSet>(m.resources.at(ResourceKind::MemoSet)).enabled_modes.push_back(MemoMode::Easy);
  auto report = validate_module(m);
  EXPECT_TRUE(report.has(ViolationCode::ResourceCountExceeded));
  EXPECT_TRUE(report.has(ViolationCode::MemoModeCount));
}

TEST(ValidateModule, GhostLinkLocatesThePage) {
  ModuleDescriptor m = full_module("m1");
  lesson_in(m).pages[1].linked_question_ids = {"q99"};
  EXPECT_EQ(path_of(validate_module(m), ViolationCode::PageLinkUnresolved), "m1/lesson/p2/linked_question_ids[0]");
}

TEST(ValidateModule, KindMismatchAndIdentifiers) {
  ModuleDescriptor m = full_module("bad/id", "EN");
  m.resources[ResourceKind::VideoLink] = PedagogicalSupport{"x"};
  auto report = validate_module(m);
  EXPECT_TRUE(report.has(ViolationCode::KindMismatch));
  EXPECT_TRUE(report.has(ViolationCode::InvalidIdentifier));
  EXPECT_TRUE(report.has(ViolationCode::InvalidLanguage));
}

TEST(ValidateModule, SoundOnGeneratedModules) {
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    auto m = random_module(rng, "m" + std::to_string(i));
    auto report = validate_module(m);
    ASSERT_TRUE(report.is_valid()) << path_of(report, report.violations.front().code);
  }
}

TEST(ValidatePack, SampleFixtureIsValid) {
  ContentPack pack = make_pack(sample_catalog());
  auto report = validate_pack(pack);
  EXPECT_TRUE(report.is_valid()) << (report.is_valid() ? "" : report.violations.front().path.str());
}

TEST(ValidatePack, VariantInUndeclaredLanguage) {
  Catalog c = catalog_with(full_module("m1"));
  c.variants[{"m1", ResourceKind::VideoLink, "de"}] =
      LocaleVariant{"m1", ResourceKind::VideoLink, "de", VideoLink{"https://x.example", "V"},
                    VariantStatus::Complete, 0, std::nullopt};
  auto report = validate_pack(pack_of(c));
  EXPECT_TRUE(report.has(ViolationCode::UndeclaredLanguage));
  EXPECT_EQ(path_of(report, ViolationCode::UndeclaredLanguage), "m1/video_link@de");
}

TEST(ValidatePack, EmptyPackIsValid) {
  EXPECT_TRUE(validate_pack(ContentPack{}).is_valid());
}

TEST(ValidatePack, CompleteVariantsAreValidatedDraftsAreNot) {
  Catalog c = catalog_with(full_module("m1"));
  c.languages.add({"fr", "Français"});
  Quiz broken = quiz_of(2);
  broken.questions[0].propositions.resize(1);
  c.variants[{"m1", ResourceKind::Quiz, "fr"}] =
      LocaleVariant{"m1", ResourceKind::Quiz, "fr", broken, VariantStatus::Draft, 0, std::nullopt};
  auto draft = validate_pack(pack_of(c));
  EXPECT_TRUE(draft.is_valid()) << canonical_dump(to_json(draft));
  c.variants[{"m1", ResourceKind::Quiz, "fr"}].status = VariantStatus::Complete;
  EXPECT_EQ(path_of(validate_pack(pack_of(c)), ViolationCode::PropositionCount), "m1/quiz@fr/q1");
}

TEST(ValidatePack, CrossReferences) {
  Catalog c = catalog_with(full_module("m1"));
  c.languages.add({"fr", "Français"});
  c.variants[{"m9", ResourceKind::Quiz, "fr"}] =
      LocaleVariant{"m9", ResourceKind::Quiz, "fr", quiz_of(1), VariantStatus::Draft, 0, std::nullopt};
  c.variants[{"m1", ResourceKind::Quiz, "en"}] =
      LocaleVariant{"m1", ResourceKind::Quiz, "en", quiz_of(1), VariantStatus::Draft, 0, std::nullopt};
  c.assets.clear();
  auto report = validate_pack(pack_of(c));
  EXPECT_TRUE(report.has(ViolationCode::VariantUnknownModule));
  EXPECT_TRUE(report.has(ViolationCode::VariantSourceLocale));
  EXPECT_TRUE(report.has(ViolationCode::AssetUnresolved));
}

TEST(ValidatePack, ModuleInUndeclaredLanguage) {
  Catalog c = catalog_with(full_module("m1", "fr"));
  EXPECT_EQ(path_of(validate_pack(pack_of(c)), ViolationCode::UndeclaredLanguage), "m1/source_locale");
}

TEST(ValidationPurity, IdenticalInputIdenticalReport) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    auto m = random_module(rng, "m" + std::to_string(i));
    m.title = "";
    m.resources.erase(ResourceKind::Lesson);
    const auto a = canonical_dump(to_json(validate_module(m)));
    const auto b = canonical_dump(to_json(validate_module(m)));
    EXPECT_EQ(a, b);
  }
}

TEST(ValidationCodes, WireNamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(ViolationCode::AssetUnresolved); ++i) {
    auto code = static_cast<ViolationCode>(i);
    EXPECT_EQ(parse_violation_code(to_string(code)), code);
  }
  EXPECT_EQ(to_string(ViolationCode::PageLinkExceedsN), "PAGE_LINK_EXCEEDS_N");
}

TEST(ValidationReportJson, Shape) {
  ModuleDescriptor m = full_module("m1");
  quiz_in(m).questions[0].propositions.resize(1);
  Json json = to_json(validate_module(m));
  EXPECT_EQ(json["is_valid"], false);
  ASSERT_FALSE(json["violations"].empty());
  EXPECT_EQ(json["violations"][0]["code"], "PROPOSITION_COUNT");
  EXPECT_EQ(json["violations"][0]["path"], "m1/quiz/q1");
  EXPECT_TRUE(json["violations"][0]["message"].is_string());
}
