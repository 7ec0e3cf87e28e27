#include "saphir/serialization.hpp"

#include <algorithm>

#include "saphir/error.hpp"

namespace saphir {

namespace {

[[noreturn]] void parse_failure(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

void put_optional(Json& object, const char* key, const std::optional<std::string>& value) {
  if (value) object[key] = *value;
}

Json to_json_impl(const Lesson& lesson) {
  Json pages = Json::array();
  for (const auto& page : lesson.pages) {
    Json tags = Json::array();
    for (const auto& tag : page.tags) {
      tags.push_back({{"number", tag.number},
                      {"text", tag.text},
                      {"coord_h", tag.coord_h},
                      {"coord_v", tag.coord_v}});
    }
    Json out = {{"page_id", page.page_id},
                {"title", page.title},
                {"text", page.text},
                {"tags", std::move(tags)},
                {"linked_question_ids", page.linked_question_ids}};
    if (page.picture) out["picture"] = to_json(*page.picture);
    put_optional(out, "caption", page.caption);
    pages.push_back(std::move(out));
  }
  return {{"pages", std::move(pages)}};
}

Json to_json_impl(const Quiz& quiz) {
  Json questions = Json::array();
  for (const auto& question : quiz.questions) {
    Json propositions = Json::array();
    for (const auto& p : question.propositions) {
      Json out = {{"proposition_id", p.proposition_id},
                  {"title", p.title},
                  {"validity", p.validity}};
      put_optional(out, "personalized_explanation", p.personalized_explanation);
      propositions.push_back(std::move(out));
    }
    questions.push_back({{"question_id", question.question_id},
                         {"title", question.title},
                         {"propositions", std::move(propositions)},
                         {"explanation", question.explanation}});
  }
  return {{"questions", std::move(questions)}};
}

Json to_json_impl(const MemoSet& memo) {
  Json triplets = Json::array();
  for (const auto& t : memo.triplets) {
    triplets.push_back(
        {{"picture", to_json(t.picture)}, {"title", t.title}, {"definition", t.definition}});
  }
  Json modes = Json::array();
  for (auto mode : memo.enabled_modes) modes.push_back(std::string(to_string(mode)));
  return {{"triplets", std::move(triplets)}, {"enabled_modes", std::move(modes)}};
}

Json to_json_impl(const AssociationGame& game) {
  Json categories = Json::array();
  for (const auto& c : game.categories) {
    categories.push_back(
        {{"category_id", c.category_id}, {"title", c.title}, {"picture", to_json(c.picture)}});
  }
  Json propositions = Json::array();
  for (const auto& p : game.propositions) {
    Json out = {{"proposition_id", p.proposition_id},
                {"title", p.title},
                {"category_id", p.category_id}};
    put_optional(out, "personalized_explanation", p.personalized_explanation);
    propositions.push_back(std::move(out));
  }
  return {{"categories", std::move(categories)}, {"propositions", std::move(propositions)}};
}

Json to_json_impl(const CycleGameRef& ref) { return {{"ref_id", ref.ref_id}, {"title", ref.title}}; }
Json to_json_impl(const ExperimentRef& ref) { return {{"ref_id", ref.ref_id}, {"title", ref.title}}; }
Json to_json_impl(const VideoLink& video) { return {{"url", video.url}, {"title", video.title}}; }
Json to_json_impl(const PedagogicalSupport& support) { return {{"body", support.body}}; }

template <typename F>
void for_each_element(const Json& array, const std::string& where, F&& f) {
  for (std::size_t i = 0; i < array.size(); ++i) {
    f(array[i], where + "[" + std::to_string(i) + "]");
  }
}

Lesson lesson_from_json(const Json& json) {
  ObjectReader root(json, "lesson");
  Lesson lesson;
  for_each_element(root.array("pages"), root.where("pages"), [&](const Json& j, const std::string& w) {
    ObjectReader r(j, w);
    LessonPage page;
    page.page_id = r.string("page_id");
    page.title = r.string("title");
    page.text = r.string("text");
    if (const Json* picture = r.optional("picture")) {
      page.picture = picture_from_json(*picture, r.where("picture"));
    }
    page.caption = r.optional_string("caption");
    for_each_element(r.array("tags"), r.where("tags"), [&](const Json& tj, const std::string& tw) {
      ObjectReader t(tj, tw);
      Tag tag;
      tag.number = t.integer("number");
      tag.text = t.string("text");
      tag.coord_h = t.number("coord_h");
      tag.coord_v = t.number("coord_v");
      t.finish();
      page.tags.push_back(std::move(tag));
    });
    page.linked_question_ids = r.string_array("linked_question_ids");
    r.finish();
    lesson.pages.push_back(std::move(page));
  });
  root.finish();
  return lesson;
}

Quiz quiz_from_json(const Json& json) {
  ObjectReader root(json, "quiz");
  Quiz quiz;
  for_each_element(root.array("questions"), root.where("questions"),
                   [&](const Json& j, const std::string& w) {
    ObjectReader r(j, w);
    Question question;
    question.question_id = r.string("question_id");
    question.title = r.string("title");
    question.explanation = r.string("explanation");
    for_each_element(r.array("propositions"), r.where("propositions"),
                     [&](const Json& pj, const std::string& pw) {
      ObjectReader p(pj, pw);
      Proposition proposition;
      proposition.proposition_id = p.string("proposition_id");
      proposition.title = p.string("title");
      proposition.validity = p.boolean("validity");
      proposition.personalized_explanation = p.optional_string("personalized_explanation");
      p.finish();
      question.propositions.push_back(std::move(proposition));
    });
    r.finish();
    quiz.questions.push_back(std::move(question));
  });
  root.finish();
  return quiz;
}

MemoSet memo_from_json(const Json& json) {
  ObjectReader root(json, "memo_set");
  MemoSet memo;
  for_each_element(root.array("triplets"), root.where("triplets"),
                   [&](const Json& j, const std::string& w) {
    ObjectReader r(j, w);
    MemoTriplet triplet;
    triplet.picture = picture_from_json(r.required("picture"), r.where("picture"));
    triplet.title = r.string("title");
    triplet.definition = r.string("definition");
    r.finish();
    memo.triplets.push_back(std::move(triplet));
  });
  for (const auto& name : root.string_array("enabled_modes")) {
    auto mode = parse_memo_mode(name);
    if (!mode) parse_failure(root.where("enabled_modes"), "unknown memo mode '" + name + "'");
    memo.enabled_modes.push_back(*mode);
  }
  root.finish();
  return memo;
}

AssociationGame association_from_json(const Json& json) {
  ObjectReader root(json, "association_game");
  AssociationGame game;
  for_each_element(root.array("categories"), root.where("categories"),
                   [&](const Json& j, const std::string& w) {
    ObjectReader r(j, w);
    AssociationCategory category;
    category.category_id = r.string("category_id");
    category.title = r.string("title");
    category.picture = picture_from_json(r.required("picture"), r.where("picture"));
    r.finish();
    game.categories.push_back(std::move(category));
  });
  for_each_element(root.array("propositions"), root.where("propositions"),
                   [&](const Json& j, const std::string& w) {
    ObjectReader r(j, w);
    AssociationProposition p;
    p.proposition_id = r.string("proposition_id");
    p.title = r.string("title");
    p.category_id = r.string("category_id");
    p.personalized_explanation = r.optional_string("personalized_explanation");
    r.finish();
    game.propositions.push_back(std::move(p));
  });
  root.finish();
  return game;
}

template <typename Ref>
Ref ref_from_json(const Json& json, const char* where) {
  ObjectReader r(json, where);
  Ref ref;
  ref.ref_id = r.string("ref_id");
  ref.title = r.string("title");
  r.finish();
  return ref;
}

const char* type_name(const Json& json) { return json.type_name(); }

}  // namespace

ObjectReader::ObjectReader(const Json& json, std::string where)
    : json_(json), where_(std::move(where)) {
  if (!json_.is_object()) parse_failure(where_, std::string("expected object, got ") + type_name(json_));
}

std::string ObjectReader::where(std::string_view key) const {
  return where_ + "." + std::string(key);
}

const Json* ObjectReader::optional(const char* key) {
  seen_.emplace_back(key);
  auto it = json_.find(key);
  if (it == json_.end() || it->is_null()) return nullptr;
  return &*it;
}

const Json& ObjectReader::required(const char* key) {
  const Json* value = optional(key);
  if (value == nullptr) parse_failure(where(key), "missing required field");
  return *value;
}

std::string ObjectReader::string(const char* key) {
  const Json& value = required(key);
  if (!value.is_string()) parse_failure(where(key), "expected string");
  return value.get<std::string>();
}

std::optional<std::string> ObjectReader::optional_string(const char* key) {
  const Json* value = optional(key);
  if (value == nullptr) return std::nullopt;
  if (!value->is_string()) parse_failure(where(key), "expected string");
  return value->get<std::string>();
}

bool ObjectReader::boolean(const char* key) {
  const Json& value = required(key);
  if (!value.is_boolean()) parse_failure(where(key), "expected boolean");
  return value.get<bool>();
}

double ObjectReader::number(const char* key) {
  const Json& value = required(key);
  if (!value.is_number()) parse_failure(where(key), "expected number");
  return value.get<double>();
}

std::int64_t ObjectReader::integer(const char* key) {
  const Json& value = required(key);
  if (value.is_number_unsigned()) {
    auto u = value.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) parse_failure(where(key), "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (!value.is_number_integer()) parse_failure(where(key), "expected integer");
  return value.get<std::int64_t>();
}

const Json& ObjectReader::array(const char* key) {
  const Json& value = required(key);
  if (!value.is_array()) parse_failure(where(key), "expected array");
  return value;
}

std::vector<std::string> ObjectReader::string_array(const char* key) {
  const Json& value = array(key);
  std::vector<std::string> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_string()) {
      parse_failure(where(key) + "[" + std::to_string(i) + "]", "expected string");
    }
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : json_.items()) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
      parse_failure(where(key), "unknown field");
    }
  }
}

Json to_json(const PictureRef& picture) {
  return {{"asset_id", picture.asset_id}, {"alt_text", picture.alt_text}};
}

Json to_json(const ResourceDocument& document) {
  return std::visit([](const auto& doc) { return to_json_impl(doc); }, document);
}

Json to_json(const ModuleDescriptor& module) {
  Json resources = Json::object();
  for (const auto& [kind, document] : module.resources) {
    resources[std::string(to_string(kind))] = to_json(document);
  }
  return {{"module_id", module.module_id},
          {"category", std::string(to_string(module.category))},
          {"source_locale", module.source_locale},
          {"title", module.title},
          {"resources", std::move(resources)}};
}

PictureRef picture_from_json(const Json& json, const std::string& where) {
  ObjectReader r(json, where);
  PictureRef picture;
  picture.asset_id = r.string("asset_id");
  picture.alt_text = r.string("alt_text");
  r.finish();
  return picture;
}

ResourceDocument document_from_json(ResourceKind kind, const Json& json) {
  switch (kind) {
    case ResourceKind::Lesson: return lesson_from_json(json);
    case ResourceKind::Quiz: return quiz_from_json(json);
    case ResourceKind::MemoSet: return memo_from_json(json);
    case ResourceKind::AssociationGame: return association_from_json(json);
    case ResourceKind::CycleGameRef: return ref_from_json<CycleGameRef>(json, "cycle_game_ref");
    case ResourceKind::ExperimentRef: return ref_from_json<ExperimentRef>(json, "experiment_ref");
    case ResourceKind::VideoLink: {
      ObjectReader r(json, "video_link");
      VideoLink video{r.string("url"), r.string("title")};
      r.finish();
      return video;
    }
    case ResourceKind::PedagogicalSupport: {
      ObjectReader r(json, "pedagogical_support");
      PedagogicalSupport support{r.string("body")};
      r.finish();
      return support;
    }
  }
  throw Error(ErrorCode::ParseError, "unknown resource kind");
}

ModuleDescriptor module_from_json(const Json& json) {
  ObjectReader r(json, "module");
  ModuleDescriptor module;
  module.module_id = r.string("module_id");
  auto category_name = r.string("category");
  auto category = parse_category(category_name);
  if (!category) parse_failure(r.where("category"), "unknown category '" + category_name + "'");
  module.category = *category;
  module.source_locale = r.string("source_locale");
  module.title = r.string("title");
  const Json& resources = r.required("resources");
  if (!resources.is_object()) parse_failure(r.where("resources"), "expected object");
  for (const auto& [name, document] : resources.items()) {
    auto kind = parse_resource_kind(name);
    if (!kind) parse_failure(r.where("resources"), "unknown resource kind '" + name + "'");
    module.resources.emplace(*kind, document_from_json(*kind, document));
  }
  r.finish();
  return module;
}

std::string canonical_dump(const Json& json) {
  try {
    return json.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("cannot serialize: ") + e.what());
  }
}

std::string canonical_serialize(const ResourceDocument& document) {
  return canonical_dump(to_json(document));
}

std::string canonical_serialize(const ModuleDescriptor& module) {
  return canonical_dump(to_json(module));
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace saphir
