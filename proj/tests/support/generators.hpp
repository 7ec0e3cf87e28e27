#pragma once

// Constructive generators of valid content for property tests. Everything is
// driven by a seeded std::mt19937_64 so failures are reproducible from the
// printed seed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "saphir/catalog.hpp"
#include "saphir/localization.hpp"
#include "saphir/model.hpp"

namespace saphir::testing {

using Rng = std::mt19937_64;

inline std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline bool coin(Rng& rng, unsigned percent = 50) { return rng() % 100 < percent; }

inline std::string word(Rng& rng) {
  static const char* kWords[] = {"water", "filtre", "sable", "nube", "水", "循环", "ar", "terra",
                                 "énergie", "carbon", "\"quoted\"", "back\\slash", "tab\there",
                                 "émoji 🌍", "line\nbreak", "soleil", "árvore", "vapor"};
  return kWords[rng() % std::size(kWords)];
}

inline std::string text(Rng& rng, std::size_t min_words = 1, std::size_t max_words = 6) {
  std::string out = word(rng);
  const std::size_t n = between(rng, min_words, max_words);
  for (std::size_t i = 1; i < n; ++i) out += " " + word(rng);
  return out;
}

/// Doubles in [0,1], including the endpoints and values needing all 17
/// significant digits.
inline double unit(Rng& rng) {
  switch (rng() % 6) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return 0.5;
    case 3: return static_cast<double>(rng() % 1000) / 1000.0;
    default: return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
}

inline std::string hex_id(Rng& rng) {
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 64; ++i) out += kHex[rng() % 16];
  return out;
}

/// Asset ids that pictures may reference. Empty means "make ids up".
struct AssetPool {
  std::vector<std::string> ids;

  std::string pick(Rng& rng) const { return ids.empty() ? hex_id(rng) : ids[rng() % ids.size()]; }
};

inline PictureRef random_picture(Rng& rng, const AssetPool& assets) {
  return {assets.pick(rng), text(rng)};
}

inline Question random_question(Rng& rng, const std::string& id) {
  Question q;
  q.question_id = id;
  q.title = text(rng);
  q.explanation = text(rng);
  const std::size_t m = between(rng, kMinPropositions, kMaxPropositions);
  for (std::size_t i = 0; i < m; ++i) {
    Proposition p;
    p.proposition_id = id + "-p" + std::to_string(i);
    p.title = text(rng);
    p.validity = coin(rng, 30);
    if (coin(rng, 40)) p.personalized_explanation = text(rng);
    q.propositions.push_back(std::move(p));
  }
  if (std::none_of(q.propositions.begin(), q.propositions.end(),
                   [](const Proposition& p) { return p.validity; })) {
    q.propositions[rng() % m].validity = true;
  }
  return q;
}

inline Quiz random_quiz(Rng& rng, std::size_t n) {
  Quiz quiz;
  for (std::size_t i = 0; i < n; ++i) quiz.questions.push_back(random_question(rng, "q" + std::to_string(i + 1)));
  return quiz;
}

inline LessonPage random_page(Rng& rng, const std::string& id, const Quiz* quiz, const AssetPool& assets) {
  LessonPage page;
  page.page_id = id;
  page.title = text(rng);
  page.text = text(rng, 0 + 1, 20);
  if (coin(rng, 70)) {
    page.picture = random_picture(rng, assets);
    if (coin(rng)) page.caption = text(rng);
    const std::size_t tags = between(rng, 0, 4);
    for (std::size_t t = 0; t < tags; ++t) {
      page.tags.push_back({static_cast<std::int64_t>(t + 1), text(rng), unit(rng), unit(rng)});
    }
  }
  if (quiz && !quiz->questions.empty()) {
    std::vector<std::string> ids;
    for (const auto& q : quiz->questions) ids.push_back(q.question_id);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(between(rng, 0, std::min<std::size_t>(ids.size(), 4)));
    page.linked_question_ids = ids;
  }
  return page;
}

inline Lesson random_lesson(Rng& rng, const Quiz* quiz, const AssetPool& assets) {
  Lesson lesson;
  const std::size_t pages = between(rng, 1, 6);
  for (std::size_t i = 0; i < pages; ++i) {
    lesson.pages.push_back(random_page(rng, "page-" + std::to_string(i + 1), quiz, assets));
  }
  return lesson;
}

inline MemoSet random_memo(Rng& rng, const AssetPool& assets, std::size_t modes) {
  MemoSet memo;
  for (std::size_t i = 0; i < kMemoTriplets; ++i) {
    memo.triplets.push_back({random_picture(rng, assets), "t" + std::to_string(i) + " " + text(rng), text(rng)});
  }
  std::vector<MemoMode> all(std::begin(kAllMemoModes), std::end(kAllMemoModes));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(modes);
  memo.enabled_modes = all;
  return memo;
}

inline AssociationGame random_association(Rng& rng, const AssetPool& assets) {
  AssociationGame game;
  game.categories = {{"c1", text(rng), random_picture(rng, assets)},
                     {"c2", text(rng), random_picture(rng, assets)}};
  const std::size_t t = between(rng, 2, 8);
  for (std::size_t i = 0; i < t; ++i) {
    AssociationProposition p;
    p.proposition_id = "a" + std::to_string(i + 1);
    p.title = text(rng);
    // The first two cover both categories.
    p.category_id = i < 2 ? game.categories[i].category_id : game.categories[rng() % 2].category_id;
    if (coin(rng, 40)) p.personalized_explanation = text(rng);
    game.propositions.push_back(std::move(p));
  }
  return game;
}

inline VideoLink random_video(Rng& rng) {
  static const char* kUrls[] = {"https://video.example.org/v/1", "http://example.com/watch?v=abc",
                                "https://media.example.net/a/b/c#t=10"};
  return {kUrls[rng() % std::size(kUrls)], text(rng)};
}

inline ResourceDocument random_document(Rng& rng, ResourceKind kind, const AssetPool& assets = {}) {
  switch (kind) {
    case ResourceKind::Lesson: {
      Quiz quiz = random_quiz(rng, between(rng, 1, 8));
      return random_lesson(rng, &quiz, assets);
    }
    case ResourceKind::Quiz: return random_quiz(rng, between(rng, 1, 12));
    case ResourceKind::MemoSet: return random_memo(rng, assets, between(rng, 1, 3));
    case ResourceKind::AssociationGame: return random_association(rng, assets);
    case ResourceKind::CycleGameRef: return CycleGameRef{"cycle-" + std::to_string(rng() % 100), text(rng)};
    case ResourceKind::ExperimentRef: return ExperimentRef{"exp-" + std::to_string(rng() % 100), text(rng)};
    case ResourceKind::VideoLink: return random_video(rng);
    case ResourceKind::PedagogicalSupport: return PedagogicalSupport{text(rng, 3, 30)};
  }
  return PedagogicalSupport{"unreachable"};
}

/// A module passing validate_module. Any subset of kinds stays within the
/// nine playable resources.
inline ModuleDescriptor random_module(Rng& rng, const std::string& id, const std::string& source_locale = "en",
                                      const AssetPool& assets = {}) {
  ModuleDescriptor m;
  m.module_id = id;
  m.category = kAllCategories[rng() % 4];
  m.source_locale = source_locale;
  m.title = text(rng);
  std::optional<Quiz> quiz;
  if (coin(rng, 80)) quiz = random_quiz(rng, between(rng, 1, 12));
  if (quiz) m.resources.emplace(ResourceKind::Quiz, *quiz);
  if (coin(rng, 85) || !quiz) m.resources.emplace(ResourceKind::Lesson, random_lesson(rng, quiz ? &*quiz : nullptr, assets));
  if (coin(rng, 60)) m.resources.emplace(ResourceKind::MemoSet, random_memo(rng, assets, between(rng, 1, 3)));
  if (coin(rng, 60)) m.resources.emplace(ResourceKind::AssociationGame, random_association(rng, assets));
  if (coin(rng, 40)) m.resources.emplace(ResourceKind::CycleGameRef, random_document(rng, ResourceKind::CycleGameRef));
  if (coin(rng, 40)) m.resources.emplace(ResourceKind::ExperimentRef, random_document(rng, ResourceKind::ExperimentRef));
  if (coin(rng, 50)) m.resources.emplace(ResourceKind::VideoLink, random_video(rng));
  if (coin(rng, 70)) m.resources.emplace(ResourceKind::PedagogicalSupport, random_document(rng, ResourceKind::PedagogicalSupport));
  return m;
}

/// Same structure, every learner-visible string rewritten. Keeps ids, links
/// and asset references, so a translation of a valid document stays valid.
inline ResourceDocument translated(const ResourceDocument& document, const std::string& locale) {
  const std::string tag = "[" + locale + "] ";
  ResourceDocument out = document;
  std::visit(
      [&](auto& doc) {
        using T = std::decay_t<decltype(doc)>;
        if constexpr (std::is_same_v<T, Lesson>) {
          for (auto& p : doc.pages) {
            p.title = tag + p.title;
            p.text = tag + p.text;
            for (auto& t : p.tags) t.text = tag + t.text;
          }
        } else if constexpr (std::is_same_v<T, Quiz>) {
          for (auto& q : doc.questions) {
            q.title = tag + q.title;
            for (auto& p : q.propositions) p.title = tag + p.title;
          }
        } else if constexpr (std::is_same_v<T, MemoSet>) {
          for (auto& t : doc.triplets) t.title = tag + t.title;
        } else if constexpr (std::is_same_v<T, AssociationGame>) {
          for (auto& p : doc.propositions) p.title = tag + p.title;
        } else if constexpr (std::is_same_v<T, PedagogicalSupport>) {
          doc.body = tag + doc.body;
        } else {
          doc.title = tag + doc.title;
        }
      },
      out);
  return out;
}

inline std::vector<std::string> language_pool() { return {"en", "fr", "zh", "es", "pt-BR", "de", "ar", "sw-KE"}; }

inline Asset random_asset(Rng& rng) {
  std::string bytes;
  const std::size_t size = between(rng, 1, 700);
  for (std::size_t i = 0; i < size; ++i) bytes += static_cast<char>(rng() & 0xff);
  std::string id = content_hash(bytes);
  return {id, coin(rng) ? "image/png" : "image/svg+xml", bytes};
}

/// A valid catalog with revisions, Draft/Complete/Stale variants and real
/// assets.
inline Catalog random_catalog(Rng& rng) {
  Catalog c;
  auto codes = language_pool();
  std::shuffle(codes.begin(), codes.end(), rng);
  codes.resize(between(rng, 1, 5));
  for (const auto& code : codes) add_language(c.languages, code, "Language " + code);

  AssetPool pool;
  const std::size_t asset_count = between(rng, 1, 5);
  for (std::size_t i = 0; i < asset_count; ++i) {
    Asset asset = random_asset(rng);
    pool.ids.push_back(asset.asset_id);
    c.assets.emplace(asset.asset_id, std::move(asset));
  }

  const std::size_t modules = between(rng, 0, 4);
  for (std::size_t i = 0; i < modules; ++i) {
    const std::string id = "mod-" + std::to_string(i) + "-" + std::to_string(rng() % 1000);
    ModuleDescriptor m = random_module(rng, id, codes[rng() % codes.size()], pool);
    c.modules.insert_or_assign(id, m);
    for (const auto& [kind, doc] : m.resources) {
      const std::size_t touches = between(rng, 1, 3);
      for (std::size_t t = 0; t < touches; ++t) touch_source(c, id, kind);
    }
    for (const auto& code : codes) {
      if (code == m.source_locale) continue;
      for (const auto& [kind, doc] : m.resources) {
        if (!coin(rng, 40)) continue;
        VariantInput input{id, kind, code, translated(doc, code),
                           coin(rng, 70) ? VariantStatus::Complete : VariantStatus::Draft, std::nullopt};
        if (coin(rng, 30)) input.module_title = "[" + code + "] " + m.title;
        upsert_variant(c, std::move(input));
      }
    }
    // Some sources move on, leaving Stale variants behind.
    for (const auto& [kind, doc] : m.resources) {
      if (coin(rng, 20)) touch_source(c, id, kind);
    }
  }
  return c;
}

/// Every k-subset of {0..n-1}, in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace saphir::testing
