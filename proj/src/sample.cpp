#include "saphir/sample.hpp"

#include <functional>

#include "saphir/localization.hpp"
#include "saphir/store.hpp"

namespace saphir {

namespace {

struct Spec {
  const char* id;
  ElementCategory category;
  const char* source_locale;
  const char* title;
  const char* pages[5];
  int memo_modes;  // 0, 2 or 3
  bool association;
  const char* cycle;  // built-in cycle game, or nullptr
  const char* experiment;
  bool video;
};

const Spec kModules[] = {
    {"water-filtration", ElementCategory::Water, "en", "Water filtration",
     {"Where tap water comes from", "Sand and gravel", "Activated carbon", "Disinfection",
      "Keeping water clean"},
     3, true, "filtration-cycle", "filtration-column", true},
    {"urban-water-cycle", ElementCategory::Water, "en", "The urban water cycle",
     {"Catchment", "Treatment plant", "Distribution network", "Sewers", "Back to the river"},
     3, true, "urban-water-cycle", nullptr, true},
    {"natural-water-cycle", ElementCategory::Water, "en", "The natural water cycle",
     {"Evaporation", "Condensation", "Precipitation", "Runoff and infiltration", "Groundwater"},
     3, true, "natural-water-cycle", nullptr, false},
    {"greenhouse-effect", ElementCategory::Energy, "en", "The greenhouse effect",
     {"Sunlight reaches the ground", "Heat goes back up", "Greenhouse gases",
      "Fossil energy", "Saving energy"},
     3, true, "carbon-cycle", nullptr, true},
    {"natural-greenhouse-effect", ElementCategory::Air, "en", "The natural greenhouse effect",
     {"A blanket of air", "Water vapour", "Carbon dioxide", "A livable planet",
      "When the balance changes"},
     2, true, nullptr, nullptr, false},
    {"biodiversity", ElementCategory::Earth, "fr", "La biodiversite",
     {"Les etres vivants", "Les habitats", "Les chaines alimentaires", "Les menaces",
      "Proteger la nature"},
     3, false, nullptr, nullptr, true},
};

struct Languages {
  const char* code;
  const char* name;
};

const Languages kLanguages[] = {
    {"en", "English"}, {"fr", "Francais"}, {"zh", "Zhongwen"}, {"es", "Espanol"},
    {"pt-BR", "Portugues (Brasil)"},
};

std::string svg(const std::string& label, int hue) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"320\" height=\"200\">"
         "<rect width=\"320\" height=\"200\" fill=\"hsl(" +
         std::to_string(hue) +
         ",60%,80%)\"/><text x=\"160\" y=\"105\" text-anchor=\"middle\" font-size=\"16\">" +
         label + "</text></svg>\n";
}

class Builder {
public:
  explicit Builder(Catalog& catalog) : catalog_(catalog) {}

  PictureRef picture(const std::string& label) {
    std::string bytes = svg(label, static_cast<int>((catalog_.assets.size() * 47) % 360));
    std::string id = content_hash(bytes);
    catalog_.assets.try_emplace(id, Asset{id, "image/svg+xml", std::move(bytes)});
    return {id, label};
  }

  ModuleDescriptor module(const Spec& spec) {
    ModuleDescriptor m;
    m.module_id = spec.id;
    m.category = spec.category;
    m.source_locale = spec.source_locale;
    m.title = spec.title;

    Quiz quiz;
    Lesson lesson;
    for (int p = 0; p < 5; ++p) {
      const std::string topic = spec.pages[p];
      LessonPage page;
      page.page_id = "p" + std::to_string(p + 1);
      page.title = topic;
      page.text = topic + ". This page explains the topic with a short text and a picture.\n"
                          "Click the numbered tags to learn more.";
      if (p != 4) {
        page.picture = picture(std::string(spec.title) + ": " + topic);
        page.caption = "Illustration: " + topic;
        const int tags = 1 + p % 3;
        for (int t = 0; t < tags; ++t) {
          page.tags.push_back({t + 1, "Detail " + std::to_string(t + 1) + " of " + topic,
                               0.2 + 0.3 * t, 0.25 + 0.2 * (t % 2)});
        }
      }
      for (int q = 0; q < 2; ++q) {
        const int n = p * 2 + q + 1;
        Question question;
        question.question_id = "q" + std::to_string(n);
        question.title = "Question " + std::to_string(n) + " about " + topic + "?";
        const int options = 3 + n % 2;
        for (int o = 0; o < options; ++o) {
          Proposition prop;
          prop.proposition_id = "q" + std::to_string(n) + "-" + std::string(1, char('a' + o));
          prop.title = "Answer " + std::string(1, char('A' + o));
          prop.validity = o == n % options;
          if (!prop.validity && o % 2 == 0) {
            prop.personalized_explanation = "Answer " + std::string(1, char('A' + o)) +
                                            " confuses two ideas from " + topic + ".";
          }
          question.propositions.push_back(std::move(prop));
        }
        question.explanation = "See the page \"" + topic + "\" again.";
        page.linked_question_ids.push_back(question.question_id);
        quiz.questions.push_back(std::move(question));
      }
      lesson.pages.push_back(std::move(page));
    }
    m.resources.emplace(ResourceKind::Lesson, std::move(lesson));
    m.resources.emplace(ResourceKind::Quiz, std::move(quiz));

    if (spec.memo_modes > 0) {
      MemoSet memo;
      for (std::size_t i = 0; i < kMemoTriplets; ++i) {
        const std::string word = std::string(spec.title) + " word " + std::to_string(i + 1);
        memo.triplets.push_back({picture(word), word, "Definition of " + word + "."});
      }
      memo.enabled_modes = {MemoMode::Classical, MemoMode::Easy};
      if (spec.memo_modes == 3) memo.enabled_modes.push_back(MemoMode::Difficult);
      m.resources.emplace(ResourceKind::MemoSet, std::move(memo));
    }
    if (spec.association) {
      AssociationGame game;
      game.categories = {{"good", "Good habits", picture("Good habits")},
                         {"bad", "Bad habits", picture("Bad habits")}};
      for (int i = 0; i < 6; ++i) {
        AssociationProposition prop;
        prop.proposition_id = "a" + std::to_string(i + 1);
        prop.title = "Habit " + std::to_string(i + 1) + " related to " + spec.title;
        prop.category_id = i % 2 == 0 ? "good" : "bad";
        if (i % 3 == 0) prop.personalized_explanation = "Think about habit " + std::to_string(i + 1) + ".";
        game.propositions.push_back(std::move(prop));
      }
      m.resources.emplace(ResourceKind::AssociationGame, std::move(game));
    }
    if (spec.cycle) {
      m.resources.emplace(ResourceKind::CycleGameRef,
                          CycleGameRef{spec.cycle, std::string("Cycle game: ") + spec.title});
    }
    if (spec.experiment) {
      m.resources.emplace(ResourceKind::ExperimentRef,
                          ExperimentRef{spec.experiment, std::string("Experiment: ") + spec.title});
    }
    if (spec.video) {
      m.resources.emplace(ResourceKind::VideoLink,
                          VideoLink{std::string("https://video.example.org/saphir/") + spec.id,
                                    std::string("Video: ") + spec.title});
    }
    m.resources.emplace(ResourceKind::PedagogicalSupport,
                        PedagogicalSupport{std::string("Suggested classroom use for \"") +
                                           spec.title +
                                           "\": read the lesson together, then play the games "
                                           "in small groups and discuss the quiz answers."});
    return m;
  }

private:
  Catalog& catalog_;
};

// Placeholder translation: every learner-visible string gets a locale prefix.
struct Translator {
  std::string prefix;

  std::string operator()(const std::string& text) const { return prefix + text; }

  void apply(PictureRef& p) const { p.alt_text = (*this)(p.alt_text); }

  ResourceDocument translate(ResourceDocument document) const {
    std::visit([this](auto& doc) { translate_in_place(doc); }, document);
    return document;
  }

  void translate_in_place(Lesson& lesson) const {
    for (auto& page : lesson.pages) {
      page.title = (*this)(page.title);
      page.text = (*this)(page.text);
      if (page.picture) apply(*page.picture);
      if (page.caption) page.caption = (*this)(*page.caption);
      for (auto& tag : page.tags) tag.text = (*this)(tag.text);
    }
  }
  void translate_in_place(Quiz& quiz) const {
    for (auto& q : quiz.questions) {
      q.title = (*this)(q.title);
      q.explanation = (*this)(q.explanation);
      for (auto& p : q.propositions) {
        p.title = (*this)(p.title);
        if (p.personalized_explanation) p.personalized_explanation = (*this)(*p.personalized_explanation);
      }
    }
  }
  void translate_in_place(MemoSet& memo) const {
    for (auto& t : memo.triplets) {
      apply(t.picture);
      t.title = (*this)(t.title);
      t.definition = (*this)(t.definition);
    }
  }
  void translate_in_place(AssociationGame& game) const {
    for (auto& c : game.categories) {
      c.title = (*this)(c.title);
      apply(c.picture);
    }
    for (auto& p : game.propositions) {
      p.title = (*this)(p.title);
      if (p.personalized_explanation) p.personalized_explanation = (*this)(*p.personalized_explanation);
    }
  }
  void translate_in_place(CycleGameRef& r) const { r.title = (*this)(r.title); }
  void translate_in_place(ExperimentRef& r) const { r.title = (*this)(r.title); }
  void translate_in_place(VideoLink& v) const { v.title = (*this)(v.title); }
  void translate_in_place(PedagogicalSupport& s) const { s.body = (*this)(s.body); }
};

struct PlannedVariant {
  const char* module_id;
  ResourceKind kind;
  const char* locale;
  VariantStatus status;
  bool with_title;
};

const PlannedVariant kVariants[] = {
    {"water-filtration", ResourceKind::Lesson, "fr", VariantStatus::Complete, true},
    {"water-filtration", ResourceKind::Quiz, "fr", VariantStatus::Complete, false},
    {"water-filtration", ResourceKind::MemoSet, "fr", VariantStatus::Complete, false},
    {"water-filtration", ResourceKind::Lesson, "zh", VariantStatus::Complete, true},
    {"water-filtration", ResourceKind::Quiz, "zh", VariantStatus::Complete, false},
    {"water-filtration", ResourceKind::Lesson, "es", VariantStatus::Complete, true},
    {"urban-water-cycle", ResourceKind::Lesson, "fr", VariantStatus::Complete, true},
    {"urban-water-cycle", ResourceKind::AssociationGame, "fr", VariantStatus::Draft, false},
    {"natural-water-cycle", ResourceKind::Lesson, "pt-BR", VariantStatus::Complete, true},
    {"greenhouse-effect", ResourceKind::Lesson, "es", VariantStatus::Draft, false},
    {"greenhouse-effect", ResourceKind::PedagogicalSupport, "fr", VariantStatus::Complete, true},
    {"natural-greenhouse-effect", ResourceKind::Quiz, "zh", VariantStatus::Complete, true},
    {"biodiversity", ResourceKind::Lesson, "en", VariantStatus::Complete, true},
    {"biodiversity", ResourceKind::Quiz, "en", VariantStatus::Complete, false},
};

template <typename F>
void for_each_variant(const Catalog& catalog, F&& f) {
  for (const auto& planned : kVariants) {
    const ModuleDescriptor& module = catalog.modules.at(planned.module_id);
    Translator translator{"[" + std::string(planned.locale) + "] "};
    VariantInput input;
    input.module_id = planned.module_id;
    input.kind = planned.kind;
    input.locale = planned.locale;
    input.document = translator.translate(module.resources.at(planned.kind));
    input.status = planned.status;
    if (planned.with_title) input.module_title = translator(module.title);
    f(std::move(input));
  }
}

}  // namespace

Catalog sample_catalog() {
  Catalog catalog;
  for (const auto& language : kLanguages) add_language(catalog.languages, language.code, language.name);
  Builder builder(catalog);
  for (const auto& spec : kModules) {
    ModuleDescriptor module = builder.module(spec);
    const std::string id = module.module_id;
    std::vector<ResourceKind> kinds;
    for (const auto& [kind, document] : module.resources) kinds.push_back(kind);
    catalog.modules.emplace(id, std::move(module));
    for (auto kind : kinds) touch_source(catalog, id, kind);
  }
  for_each_variant(catalog, [&](VariantInput input) { upsert_variant(catalog, std::move(input)); });
  return catalog;
}

void seed_sample(Repository& repo) {
  const Catalog catalog = sample_catalog();
  const Catalog current = repo.snapshot();
  for (const auto& language : catalog.languages.list()) {
    if (!current.languages.contains(language.code)) {
      repo.add_language(language.code, language.display_name);
    }
  }
  for (const auto& [id, asset] : catalog.assets) repo.put_asset(asset.media_type, asset.bytes);
  for (const auto& [id, module] : catalog.modules) {
    if (current.find_module(id)) repo.delete_module(id);
    repo.put_module(module);
  }
  for_each_variant(catalog, [&](VariantInput input) { repo.upsert_variant(std::move(input)); });
}

}  // namespace saphir
