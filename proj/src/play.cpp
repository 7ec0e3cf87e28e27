#include "saphir/play.hpp"

#include <algorithm>
#include <map>

#include "saphir/error.hpp"
#include "saphir/rng.hpp"

namespace saphir {

std::vector<PageLinks> page_links_of(const Lesson& lesson) {
  std::vector<PageLinks> links;
  links.reserve(lesson.pages.size());
  for (const auto& page : lesson.pages) links.push_back({page.page_id, page.linked_question_ids});
  return links;
}

QuizSession generate_quiz_session(const SessionRequest& request) {
  const auto& questions = request.quiz.questions;
  if (questions.empty()) throw Error(ErrorCode::EmptyQuiz, "quiz has no question");
  if (request.target_count == 0) {
    throw Error(ErrorCode::InvalidArgument, "target_count must be positive");
  }
  const std::size_t k = std::min(request.target_count, questions.size());

  auto require_known = [&](const std::string& id) {
    if (request.quiz.find(id) == nullptr) {
      throw Error(ErrorCode::UnknownQuestion, "question '" + id + "' is not in the quiz");
    }
  };
  for (const auto& id : request.answered_ids) require_known(id);

  // Strata: one per page (link order, deduplicated), then unlinked questions
  // in quiz order.
  const std::size_t page_count = request.page_links.size();
  std::vector<std::vector<std::string>> strata(page_count + 1);
  std::map<std::string, std::vector<std::size_t>> pages_of;
  for (std::size_t p = 0; p < page_count; ++p) {
    for (const auto& id : request.page_links[p].linked_question_ids) {
      require_known(id);
      auto& pages = pages_of[id];
      if (pages.empty() || pages.back() != p) {
        pages.push_back(p);
        strata[p].push_back(id);
      }
    }
  }
  for (const auto& q : questions) {
    if (pages_of.count(q.question_id) == 0) strata[page_count].push_back(q.question_id);
  }

  const auto is_answered = [&](const std::string& id) { return request.answered_ids.count(id) > 0; };
  const auto unanswered = static_cast<std::size_t>(std::count_if(
      questions.begin(), questions.end(),
      [&](const Question& q) { return !is_answered(q.question_id); }));
  const bool answered_may_cover = unanswered < k;

  DeterministicRng rng(request.seed);
  std::vector<std::string> selected;
  std::set<std::string> chosen;
  std::vector<bool> covered(page_count, false);

  auto take = [&](const std::string& id, std::vector<bool>& visited) {
    selected.push_back(id);
    chosen.insert(id);
    auto it = pages_of.find(id);
    if (it == pages_of.end()) return;
    for (auto p : it->second) {
      visited[p] = true;
      covered[p] = true;
    }
  };

  while (selected.size() < k) {
    bool progress = false;
    std::vector<bool> visited(page_count, false);
    for (std::size_t s = 0; s <= page_count && selected.size() < k; ++s) {
      const bool is_page = s < page_count;
      if (is_page && visited[s]) continue;
      std::vector<std::string> candidates;
      for (const auto& id : strata[s]) {
        if (!chosen.count(id) && !is_answered(id)) candidates.push_back(id);
      }
      if (candidates.empty() && is_page && answered_may_cover && !covered[s]) {
        for (const auto& id : strata[s]) {
          if (!chosen.count(id)) candidates.push_back(id);
        }
      }
      if (candidates.empty()) continue;
      take(rng.pick(candidates), visited);
      progress = true;
    }
    if (!progress) break;
  }

  // Whatever is left unselected now is answered.
  std::vector<std::string> remaining;
  for (const auto& q : questions) {
    if (!chosen.count(q.question_id)) remaining.push_back(q.question_id);
  }
  std::vector<bool> ignored(page_count, false);
  while (selected.size() < k) {
    const std::size_t index = rng.below(remaining.size());
    take(remaining[index], ignored);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(index));
  }

  QuizSession session;
  session.question_ids = std::move(selected);
  for (std::size_t p = 0; p < page_count; ++p) {
    if (covered[p]) session.covered_page_ids.insert(request.page_links[p].page_id);
  }
  return session;
}

const Question& pick_page_question(const std::vector<Question>& pool,
                                   const std::set<std::string>& answered_ids, std::uint64_t seed) {
  if (pool.empty()) throw Error(ErrorCode::EmptyPool, "page has no linked question");
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (answered_ids.count(pool[i].question_id) == 0) candidates.push_back(i);
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < pool.size(); ++i) candidates.push_back(i);
  }
  DeterministicRng rng(seed);
  return pool[rng.pick(candidates)];
}

Json to_json(const AnswerFeedback& feedback) {
  Json per = Json::array();
  for (const auto& f : feedback.per_proposition_feedback) {
    per.push_back({{"proposition_id", f.proposition_id}, {"explanation", f.explanation}});
  }
  Json out = {{"correct", feedback.correct}, {"per_proposition_feedback", std::move(per)}};
  if (feedback.general_explanation) out["general_explanation"] = *feedback.general_explanation;
  return out;
}

AnswerFeedback evaluate_answer(const Question& question, const std::set<std::string>& selected_ids) {
  for (const auto& id : selected_ids) {
    auto it = std::find_if(question.propositions.begin(), question.propositions.end(),
                           [&](const Proposition& p) { return p.proposition_id == id; });
    if (it == question.propositions.end()) {
      throw Error(ErrorCode::UnknownProposition,
                  "proposition '" + id + "' is not in question '" + question.question_id + "'");
    }
  }

  AnswerFeedback feedback;
  feedback.correct = true;
  for (const auto& p : question.propositions) {
    const bool selected = selected_ids.count(p.proposition_id) > 0;
    if (selected == p.validity) continue;
    feedback.correct = false;
    if (p.personalized_explanation) {
      feedback.per_proposition_feedback.push_back({p.proposition_id, *p.personalized_explanation});
    }
  }
  if (!feedback.correct) feedback.general_explanation = question.explanation;
  return feedback;
}

std::string_view to_string(CardFace face) noexcept {
  switch (face) {
    case CardFace::Picture: return "picture";
    case CardFace::Title: return "title";
    case CardFace::Definition: return "definition";
  }
  return "";
}

Json to_json(const MemoDeck& deck) {
  Json cards = Json::array();
  for (const auto& card : deck.cards) {
    Json out = {{"card_id", card.card_id},
                {"face", std::string(to_string(card.face))},
                {"pair_key", card.pair_key}};
    if (card.picture) out["picture"] = to_json(*card.picture);
    if (card.face != CardFace::Picture) out["text"] = card.text;
    cards.push_back(std::move(out));
  }
  return {{"mode", std::string(to_string(deck.mode))}, {"cards", std::move(cards)}};
}

MemoDeck derive_memo_deck(const MemoSet& memo, MemoMode mode, std::uint64_t seed) {
  if (!memo.is_enabled(mode)) {
    throw Error(ErrorCode::ModeNotEnabled,
                "memo mode '" + std::string(to_string(mode)) + "' is not enabled");
  }
  auto picture_card = [](const MemoTriplet& t, std::size_t key) {
    return MemoCard{"", CardFace::Picture, "", t.picture, key};
  };
  auto title_card = [](const MemoTriplet& t, std::size_t key) {
    return MemoCard{"", CardFace::Title, t.title, std::nullopt, key};
  };
  auto definition_card = [](const MemoTriplet& t, std::size_t key) {
    return MemoCard{"", CardFace::Definition, t.definition, std::nullopt, key};
  };

  MemoDeck deck;
  deck.mode = mode;
  for (std::size_t i = 0; i < memo.triplets.size(); ++i) {
    const auto& t = memo.triplets[i];
    switch (mode) {
      case MemoMode::Classical:
        deck.cards.push_back(picture_card(t, i));
        deck.cards.push_back(picture_card(t, i));
        break;
      case MemoMode::Easy:
        deck.cards.push_back(picture_card(t, i));
        deck.cards.push_back(title_card(t, i));
        break;
      case MemoMode::Difficult:
        deck.cards.push_back(title_card(t, i));
        deck.cards.push_back(definition_card(t, i));
        break;
    }
  }
  DeterministicRng rng(seed);
  rng.shuffle(deck.cards);
  for (std::size_t i = 0; i < deck.cards.size(); ++i) {
    deck.cards[i].card_id = "card-" + std::to_string(i);
  }
  return deck;
}

bool check_memo_match(const MemoDeck& deck, const std::string& a, const std::string& b) {
  auto find = [&](const std::string& id) -> const MemoCard& {
    auto it = std::find_if(deck.cards.begin(), deck.cards.end(),
                           [&](const MemoCard& c) { return c.card_id == id; });
    if (it == deck.cards.end()) throw Error(ErrorCode::UnknownCard, "unknown card '" + id + "'");
    return *it;
  };
  const MemoCard& first = find(a);
  const MemoCard& second = find(b);
  if (a == b) throw Error(ErrorCode::SameCard, "a card cannot match itself");
  return first.pair_key == second.pair_key;
}

AssociationFeedback check_association(const AssociationGame& game,
                                      const std::string& proposition_id,
                                      const std::string& chosen_category_id) {
  auto p = std::find_if(game.propositions.begin(), game.propositions.end(),
                        [&](const AssociationProposition& x) { return x.proposition_id == proposition_id; });
  if (p == game.propositions.end()) {
    throw Error(ErrorCode::UnknownProposition, "unknown proposition '" + proposition_id + "'");
  }
  auto c = std::find_if(game.categories.begin(), game.categories.end(),
                        [&](const AssociationCategory& x) { return x.category_id == chosen_category_id; });
  if (c == game.categories.end()) {
    throw Error(ErrorCode::UnknownCategory, "unknown category '" + chosen_category_id + "'");
  }
  AssociationFeedback feedback;
  feedback.correct = p->category_id == chosen_category_id;
  if (!feedback.correct) feedback.explanation = p->personalized_explanation;
  return feedback;
}

Quiz shuffle_propositions(Quiz quiz, std::uint64_t seed) {
  DeterministicRng rng(seed);
  for (auto& question : quiz.questions) rng.shuffle(question.propositions);
  return quiz;
}

}  // namespace saphir
