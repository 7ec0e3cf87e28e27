#pragma once

// Small hand-built documents shared by the unit tests.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "saphir/model.hpp"

namespace saphir::testing {

inline const std::string kAsset = std::string(64, 'a');

inline Question simple_question(const std::string& id, std::size_t propositions = 3) {
  Question q;
  q.question_id = id;
  q.title = "Title of " + id;
  q.explanation = "General explanation for " + id;
  for (std::size_t i = 0; i < propositions; ++i) {
    q.propositions.push_back({std::string(1, static_cast<char>('a' + i)), "Option " + std::to_string(i), std::nullopt, i == 0});
  }
  return q;
}

inline Quiz quiz_of(std::size_t n) {
  Quiz quiz;
  for (std::size_t i = 1; i <= n; ++i) quiz.questions.push_back(simple_question("q" + std::to_string(i)));
  return quiz;
}

inline LessonPage simple_page(const std::string& id, std::vector<std::string> links = {}) {
  LessonPage page;
  page.page_id = id;
  page.title = "Page " + id;
  page.text = "Text of " + id;
  page.linked_question_ids = std::move(links);
  return page;
}

inline LessonPage pictured_page(const std::string& id, std::size_t tags = 2) {
  LessonPage page = simple_page(id);
  page.picture = PictureRef{kAsset, "Picture for " + id};
  page.caption = "Caption " + id;
  for (std::size_t i = 0; i < tags; ++i) {
    page.tags.push_back({static_cast<std::int64_t>(i + 1), "Tag " + std::to_string(i + 1), 0.25 * i, 0.5});
  }
  return page;
}

inline MemoSet memo_of(std::vector<MemoMode> modes = {MemoMode::Classical, MemoMode::Easy, MemoMode::Difficult}) {
  MemoSet memo;
  for (int i = 0; i < 6; ++i) {
    memo.triplets.push_back({PictureRef{kAsset, "alt " + std::to_string(i)}, "Word " + std::to_string(i),
                             "Definition " + std::to_string(i)});
  }
  memo.enabled_modes = std::move(modes);
  return memo;
}

inline AssociationGame association_of(std::size_t per_category = 3) {
  AssociationGame game;
  game.categories = {{"A", "Category A", PictureRef{kAsset, "A"}}, {"B", "Category B", PictureRef{kAsset, "B"}}};
  for (std::size_t i = 0; i < 2 * per_category; ++i) {
    AssociationProposition p{"p" + std::to_string(i + 1), "Item " + std::to_string(i + 1), i % 2 == 0 ? "A" : "B",
                             std::nullopt};
    if (i == 0) p.personalized_explanation = "Item 1 belongs to A";
    game.propositions.push_back(std::move(p));
  }
  return game;
}

/// Every kind, three memo modes: nine playable resources.
inline ModuleDescriptor full_module(const std::string& id = "m1", const std::string& locale = "en") {
  ModuleDescriptor m;
  m.module_id = id;
  m.category = ElementCategory::Water;
  m.source_locale = locale;
  m.title = "Module " + id;
  Quiz quiz = quiz_of(5);
  Lesson lesson;
  lesson.pages.push_back(pictured_page("p1"));
  lesson.pages.back().linked_question_ids = {"q1", "q2"};
  lesson.pages.push_back(simple_page("p2", {"q3"}));
  lesson.pages.push_back(simple_page("p3", {"q4", "q5"}));
  m.resources.emplace(ResourceKind::Lesson, lesson);
  m.resources.emplace(ResourceKind::Quiz, quiz);
  m.resources.emplace(ResourceKind::MemoSet, memo_of());
  m.resources.emplace(ResourceKind::AssociationGame, association_of());
  m.resources.emplace(ResourceKind::CycleGameRef, CycleGameRef{"water-cycle", "Cycle"});
  m.resources.emplace(ResourceKind::ExperimentRef, ExperimentRef{"filter", "Experiment"});
  m.resources.emplace(ResourceKind::VideoLink, VideoLink{"https://video.example.org/x", "Video"});
  m.resources.emplace(ResourceKind::PedagogicalSupport, PedagogicalSupport{"Use in class."});
  return m;
}

/// Points every picture of `m` at `asset_id`.
inline ModuleDescriptor with_asset(ModuleDescriptor m, const std::string& asset_id) {
  for (auto& [kind, doc] : m.resources) {
    if (auto* lesson = std::get_if<Lesson>(&doc)) {
      for (auto& p : lesson->pages) {
        if (p.picture) p.picture->asset_id = asset_id;
      }
    } else if (auto* memo = std::get_if<MemoSet>(&doc)) {
      for (auto& t : memo->triplets) t.picture.asset_id = asset_id;
    } else if (auto* game = std::get_if<AssociationGame>(&doc)) {
      for (auto& c : game->categories) c.picture.asset_id = asset_id;
    }
  }
  return m;
}

/// Removed with its contents on destruction.
class TempDir {
public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "saphir-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) std::abort();
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

}  // namespace saphir::testing
