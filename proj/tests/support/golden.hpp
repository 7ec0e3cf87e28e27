#pragma once

// Golden vectors: seeded inputs paired with the outputs this build computes
// for them. Inputs are stored in full so a vector can be replayed without the
// generator that produced it.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "saphir/play.hpp"
#include "saphir/rng.hpp"
#include "saphir/serialization.hpp"

namespace saphir::testing::golden {

inline constexpr const char* kFiles[] = {"sessions.json", "page_picks.json", "memo_decks.json", "rng.json"};

// --- inputs -----------------------------------------------------------------

inline Json random_session_input(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 14;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("q" + std::to_string(i + 1));
  Json pages = Json::array();
  const std::size_t page_count = rng() % 7;
  for (std::size_t p = 0; p < page_count; ++p) {
    Json links = Json::array();
    for (const auto& id : ids) {
      if (rng() % 100 < 30) links.push_back(id);
    }
    pages.push_back({{"page_id", "p" + std::to_string(p + 1)}, {"linked_question_ids", links}});
  }
  Json answered = Json::array();
  for (const auto& id : ids) {
    if (rng() % 100 < 35) answered.push_back(id);
  }
  return {{"question_ids", ids},
          {"pages", pages},
          {"answered_ids", answered},
          {"seed", std::to_string(rng())},
          {"target_count", 1 + rng() % 7}};
}

inline Json random_pick_input(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 6;
  Json pool = Json::array();
  Json answered = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    pool.push_back("q" + std::to_string(i + 1));
    if (rng() % 2) answered.push_back("q" + std::to_string(i + 1));
  }
  return {{"pool", pool}, {"answered_ids", answered}, {"seed", std::to_string(rng())}};
}

inline Json memo_input(std::uint64_t seed, MemoMode mode) {
  MemoSet memo;
  for (int i = 0; i < 6; ++i) {
    const std::string word = "word " + std::to_string(i + 1);
    memo.triplets.push_back(
        {PictureRef{std::string(63, 'a') + std::to_string(i), "picture of " + word}, word, "meaning of " + word});
  }
  memo.enabled_modes = {MemoMode::Classical, MemoMode::Easy, MemoMode::Difficult};
  return {{"memo", to_json(ResourceDocument{memo})},
          {"mode", std::string(to_string(mode))},
          {"seed", std::to_string(seed)}};
}

// --- outputs ----------------------------------------------------------------

inline std::uint64_t seed_of(const Json& input) { return std::stoull(input["seed"].get<std::string>()); }

inline std::set<std::string> id_set(const Json& array) {
  return {array.begin(), array.end()};
}

inline Question placeholder_question(const std::string& id) {
  Question q;
  q.question_id = id;
  q.title = id;
  q.explanation = id;
  q.propositions = {{id + "-a", "a", std::nullopt, true}, {id + "-b", "b", std::nullopt, false}};
  return q;
}

inline Json session_output(const Json& input) {
  SessionRequest request;
  for (const auto& id : input["question_ids"]) request.quiz.questions.push_back(placeholder_question(id));
  for (const auto& page : input["pages"]) {
    request.page_links.push_back({page["page_id"], page["linked_question_ids"].get<std::vector<std::string>>()});
  }
  request.answered_ids = id_set(input["answered_ids"]);
  request.seed = seed_of(input);
  request.target_count = input["target_count"];
  const QuizSession session = generate_quiz_session(request);
  return {{"question_ids", session.question_ids}, {"covered_page_ids", session.covered_page_ids}};
}

inline Json pick_output(const Json& input) {
  std::vector<Question> pool;
  for (const auto& id : input["pool"]) pool.push_back(placeholder_question(id));
  return {{"question_id", pick_page_question(pool, id_set(input["answered_ids"]), seed_of(input)).question_id}};
}

inline Json memo_output(const Json& input) {
  const MemoSet memo = std::get<MemoSet>(document_from_json(ResourceKind::MemoSet, input["memo"]));
  return to_json(derive_memo_deck(memo, *parse_memo_mode(input["mode"].get<std::string>()), seed_of(input)));
}

inline Json rng_output(const Json& input) {
  DeterministicRng rng(seed_of(input));
  Json raw = Json::array();
  for (int i = 0; i < 8; ++i) raw.push_back(std::to_string(rng.next()));
  Json below = Json::array();
  for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 10ull, 1000ull, (1ull << 63) + 1}) {
    below.push_back(std::to_string(rng.below(bound)));
  }
  std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(items);
  return {{"next", raw}, {"below", below}, {"shuffle", items}};
}

inline Json output_for(const std::string& file, const Json& input) {
  if (file == "sessions.json") return session_output(input);
  if (file == "page_picks.json") return pick_output(input);
  if (file == "memo_decks.json") return memo_output(input);
  return rng_output(input);
}

// --- files ------------------------------------------------------------------

/// {"vectors": [{"input", "output"}]} for each file.
inline std::map<std::string, Json> generate() {
  std::map<std::string, Json> files;
  std::mt19937_64 rng(20240611);
  auto add = [&](const std::string& file, Json input) {
    Json output = output_for(file, input);
    files[file]["vectors"].push_back({{"input", std::move(input)}, {"output", std::move(output)}});
  };
  for (int i = 0; i < 100; ++i) add("sessions.json", random_session_input(rng));
  for (int i = 0; i < 50; ++i) add("page_picks.json", random_pick_input(rng));
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 18446744073709551615ull}) {
    for (MemoMode mode : {MemoMode::Classical, MemoMode::Easy, MemoMode::Difficult}) {
      add("memo_decks.json", memo_input(seed, mode));
    }
  }
  for (std::uint64_t seed : {0ull, 1ull, 5489ull, 18446744073709551615ull}) {
    add("rng.json", {{"seed", std::to_string(seed)}});
  }
  return files;
}

inline Json load(const std::filesystem::path& dir, const std::string& file) {
  std::ifstream in(dir / file, std::ios::binary);
  if (!in) return Json();
  return parse_json(std::string{std::istreambuf_iterator<char>(in), {}});
}

/// Number of vectors whose recomputed output differs; -1 if a file is missing.
inline int mismatches(const std::filesystem::path& dir, std::string* first_failure = nullptr) {
  int bad = 0;
  for (const char* file : kFiles) {
    const Json json = load(dir, file);
    if (!json.is_object() || !json.contains("vectors") || json["vectors"].empty()) return -1;
    for (std::size_t i = 0; i < json["vectors"].size(); ++i) {
      const Json& v = json["vectors"][i];
      if (output_for(file, v["input"]) != v["output"]) {
        if (bad++ == 0 && first_failure) *first_failure = std::string(file) + " #" + std::to_string(i);
      }
    }
  }
  return bad;
}

}  // namespace saphir::testing::golden
