#pragma once

// Learner-facing mechanics. Everything here is a pure function of its inputs
// and seed.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "saphir/model.hpp"
#include "saphir/serialization.hpp"

namespace saphir {

inline constexpr std::size_t kDefaultSessionSize = 5;

struct PageLinks {
  std::string page_id;
  std::vector<std::string> linked_question_ids;
};

struct SessionRequest {
  Quiz quiz;
  std::vector<PageLinks> page_links;  // lesson page order
  std::set<std::string> answered_ids;
  std::uint64_t seed = 0;
  std::size_t target_count = kDefaultSessionSize;
};

struct QuizSession {
  std::vector<std::string> question_ids;
  std::set<std::string> covered_page_ids;

  friend bool operator==(const QuizSession&, const QuizSession&) = default;
};

/// Page links of a lesson, in page order.
std::vector<PageLinks> page_links_of(const Lesson& lesson);

/// Picks min(target_count, n) distinct questions.
///
/// Strata are the lesson pages in order followed by the questions no page
/// links. Passes visit the strata round-robin, one pick per stratum, choosing
/// uniformly (seeded) among the stratum's unselected unanswered questions.
/// A page also counts as visited in a pass when a question picked earlier in
/// that pass is linked to it. Answered questions are never used while at
/// least k unanswered ones exist; otherwise a page with no unanswered
/// candidate may cover itself with an answered one in the passes, and any
/// slots left after the passes are filled uniformly from the remaining
/// answered questions.
///
/// Throws Error(EmptyQuiz) for an empty quiz and Error(UnknownQuestion) when
/// a page link or answered id is not in the quiz.
QuizSession generate_quiz_session(const SessionRequest& request);

/// An unanswered question from the pool when there is one, else any; seeded
/// uniform in both cases. Throws Error(EmptyPool).
const Question& pick_page_question(const std::vector<Question>& pool,
                                   const std::set<std::string>& answered_ids, std::uint64_t seed);

struct PropositionFeedback {
  std::string proposition_id;
  std::string explanation;

  friend bool operator==(const PropositionFeedback&, const PropositionFeedback&) = default;
};

struct AnswerFeedback {
  bool correct = false;
  std::vector<PropositionFeedback> per_proposition_feedback;
  std::optional<std::string> general_explanation;  // set iff incorrect
};

Json to_json(const AnswerFeedback& feedback);

/// Correct iff the selection equals the set of valid propositions. Wrongly
/// selected or wrongly omitted propositions contribute their personalized
/// explanation, in question order. Throws Error(UnknownProposition).
AnswerFeedback evaluate_answer(const Question& question, const std::set<std::string>& selected_ids);

enum class CardFace { Picture, Title, Definition };

std::string_view to_string(CardFace face) noexcept;

struct MemoCard {
  std::string card_id;
  CardFace face = CardFace::Picture;
  std::string text;                   // Title / Definition faces
  std::optional<PictureRef> picture;  // Picture faces
  std::size_t pair_key = 0;           // triplet index

  friend bool operator==(const MemoCard&, const MemoCard&) = default;
};

struct MemoDeck {
  MemoMode mode = MemoMode::Classical;
  std::vector<MemoCard> cards;

  friend bool operator==(const MemoDeck&, const MemoDeck&) = default;
};

Json to_json(const MemoDeck& deck);

/// Two cards per triplet: Classical pairs two pictures, Easy a picture with
/// its title, Difficult a title with its definition. Cards are shuffled and
/// then numbered by position, so ids carry no pairing information.
/// Throws Error(ModeNotEnabled).
MemoDeck derive_memo_deck(const MemoSet& memo, MemoMode mode, std::uint64_t seed);

/// Throws Error(UnknownCard) or Error(SameCard).
bool check_memo_match(const MemoDeck& deck, const std::string& a, const std::string& b);

struct AssociationFeedback {
  bool correct = false;
  std::optional<std::string> explanation;
};

/// Throws Error(UnknownProposition) or Error(UnknownCategory).
AssociationFeedback check_association(const AssociationGame& game,
                                      const std::string& proposition_id,
                                      const std::string& chosen_category_id);

/// Seeded permutation of each question's propositions, for presentation.
Quiz shuffle_propositions(Quiz quiz, std::uint64_t seed);

}  // namespace saphir
