#include "saphir/service.hpp"

#include <sodium.h>

#include <charconv>
#include <random>

#include "saphir/localization.hpp"
#include "saphir/play.hpp"

namespace saphir {

std::string_view to_string(Action action) noexcept {
  switch (action) {
    case Action::ReadLearnerContent: return "read_learner_content";
    case Action::ReadPedagogicalSupport: return "read_pedagogical_support";
    case Action::ReadAuthoring: return "read_authoring";
    case Action::WriteSource: return "write_source";
    case Action::WriteVariant: return "write_variant";
    case Action::WriteAsset: return "write_asset";
    case Action::AddLanguage: return "add_language";
    case Action::ManageUsers: return "manage_users";
    case Action::ExportPack: return "export_pack";
    case Action::ReadReports: return "read_reports";
  }
  return "";
}

bool is_allowed(Action action, const std::optional<Credentials>& user, bool teacher_mode,
                const std::string& locale) {
  switch (action) {
    case Action::ReadLearnerContent:
      return true;
    case Action::ReadPedagogicalSupport:
      return teacher_mode || user.has_value();
    case Action::ReadAuthoring:
    case Action::WriteAsset:
    case Action::ExportPack:
    case Action::ReadReports:
      return user.has_value();
    case Action::WriteSource:
      return user && (user->role == Role::Designer || user->role == Role::Admin);
    case Action::WriteVariant:
      if (!user) return false;
      if (user->role == Role::Translator) return user->locale_grants.count(locale) > 0;
      return true;
    case Action::AddLanguage:
    case Action::ManageUsers:
      return user && user->role == Role::Admin;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Tokens

namespace {

std::string base64url(std::string_view bytes) {
  std::string out(sodium_base64_encoded_len(bytes.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()),
                    bytes.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::optional<std::string> from_base64url(std::string_view text) {
  std::string out(text.size(), '\0');
  std::size_t len = 0;
  if (sodium_base642bin(reinterpret_cast<unsigned char*>(out.data()), out.size(), text.data(),
                        text.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_URLSAFE_NO_PADDING) != 0) {
    return std::nullopt;
  }
  out.resize(len);
  return out;
}

std::string hmac(std::string_view key, std::string_view message) {
  unsigned char mac[crypto_auth_hmacsha256_BYTES];
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, reinterpret_cast<const unsigned char*>(key.data()), key.size());
  crypto_auth_hmacsha256_update(&state, reinterpret_cast<const unsigned char*>(message.data()),
                                message.size());
  crypto_auth_hmacsha256_final(&state, mac);
  return std::string(reinterpret_cast<const char*>(mac), sizeof mac);
}

std::int64_t epoch_seconds(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

}  // namespace

TokenSigner::TokenSigner(std::string secret, std::chrono::seconds ttl, Clock clock)
    : ttl_(ttl), clock_(std::move(clock)) {
  if (secret.empty()) throw Error(ErrorCode::InvalidArgument, "token secret is empty");
  if (sodium_init() < 0) throw Error(ErrorCode::IoError, "libsodium failed to initialize");
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(secret.data()), secret.size());
  key_.assign(reinterpret_cast<const char*>(digest), sizeof digest);
}

std::string TokenSigner::issue(const Credentials& user) const {
  Json payload = {{"login", user.login},
                  {"role", std::string(to_string(user.role))},
                  {"grants", user.locale_grants},
                  {"exp", epoch_seconds(clock_() + ttl_)}};
  const std::string body = base64url(payload.dump());
  return body + "." + base64url(hmac(key_, body));
}

std::optional<Credentials> TokenSigner::verify(std::string_view token) const {
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const std::string_view body = token.substr(0, dot);
  const auto mac = from_base64url(token.substr(dot + 1));
  if (!mac || mac->size() != crypto_auth_hmacsha256_BYTES) return std::nullopt;
  const std::string expected = hmac(key_, body);
  if (sodium_memcmp(mac->data(), expected.data(), expected.size()) != 0) return std::nullopt;
  const auto payload = from_base64url(body);
  if (!payload) return std::nullopt;
  try {
    const Json json = parse_json(*payload);
    ObjectReader r(json, "token");
    Credentials user;
    user.login = r.string("login");
    const auto role = parse_role(r.string("role"));
    for (auto& code : r.string_array("grants")) user.locale_grants.insert(std::move(code));
    const std::int64_t exp = r.integer("exp");
    r.finish();
    if (!role || exp <= epoch_seconds(clock_())) return std::nullopt;
    user.role = *role;
    return user;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Request handling

namespace {

struct ApiError {
  int status;
  std::string code;
  std::string message;
};

std::pair<int, const char*> classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError: return {400, "BAD_REQUEST"};
    case ErrorCode::UnresolvedLink: return {422, "UNRESOLVED_LINK"};
    case ErrorCode::EmptyQuiz: return {422, "NO_QUIZ"};
    case ErrorCode::EmptyPool: return {422, "EMPTY_POOL"};
    case ErrorCode::UnknownQuestion: return {422, "UNKNOWN_QUESTION"};
    case ErrorCode::UnknownProposition: return {422, "UNKNOWN_PROPOSITION"};
    case ErrorCode::UnknownCategory: return {422, "UNKNOWN_CATEGORY"};
    case ErrorCode::UnknownCard: return {422, "UNKNOWN_CARD"};
    case ErrorCode::SameCard: return {422, "SAME_CARD"};
    case ErrorCode::ModeNotEnabled: return {422, "MODE_NOT_ENABLED"};
    case ErrorCode::DuplicateLanguage: return {409, "DUPLICATE_LANGUAGE"};
    case ErrorCode::MalformedLanguageCode: return {422, "MALFORMED_LANGUAGE_CODE"};
    case ErrorCode::UnknownLocale: return {422, "UNKNOWN_LOCALE"};
    case ErrorCode::UnknownSourceResource: return {404, "UNKNOWN_SOURCE_RESOURCE"};
    case ErrorCode::UnknownResource:
    case ErrorCode::UnknownModule:
    case ErrorCode::UnknownUser:
    case ErrorCode::UnknownAsset: return {404, "NOT_FOUND"};
    case ErrorCode::ValidationFailure: return {422, "VALIDATION_FAILED"};
    case ErrorCode::DuplicateLogin: return {409, "DUPLICATE_LOGIN"};
    case ErrorCode::WeakPassword: return {422, "WEAK_PASSWORD"};
    case ErrorCode::InvalidGrants: return {422, "INVALID_GRANTS"};
    case ErrorCode::VersionMismatch: return {422, "VERSION_MISMATCH"};
    case ErrorCode::IoError:
    case ErrorCode::CorruptRepository:
    case ErrorCode::RepositoryLocked: break;
  }
  return {500, "INTERNAL_ERROR"};
}

ApiResponse json_response(int status, const Json& body) {
  return {status, "application/json", canonical_dump(body)};
}

ApiResponse error_response(int status, const std::string& code, const std::string& message,
                           const ValidationReport* report = nullptr) {
  Json error = {{"code", code}, {"message", message}};
  if (report) error["report"] = to_json(*report);
  return json_response(status, {{"error", std::move(error)}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) out.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& where) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, where + ": expected an unsigned 64-bit integer");
  }
  return value;
}

std::uint64_t parse_seed(const Json& json, const std::string& where) {
  if (json.is_number_unsigned()) return json.get<std::uint64_t>();
  if (json.is_number_integer() && json.get<std::int64_t>() >= 0) return json.get<std::uint64_t>();
  if (json.is_string()) return parse_seed_text(json.get<std::string>(), where);
  throw Error(ErrorCode::InvalidArgument, where + ": expected an unsigned 64-bit integer");
}

std::set<std::string> to_set(std::vector<std::string> items) {
  return {std::make_move_iterator(items.begin()), std::make_move_iterator(items.end())};
}

// Solutions and pre-answer feedback never leave learner endpoints.
void scrub_question(Json& question) {
  question.erase("explanation");
  for (auto& p : question["propositions"]) {
    p.erase("validity");
    p.erase("personalized_explanation");
  }
}

Json scrubbed(ResourceKind kind, Json document) {
  if (kind == ResourceKind::Quiz) {
    for (auto& q : document["questions"]) scrub_question(q);
  } else if (kind == ResourceKind::AssociationGame) {
    for (auto& p : document["propositions"]) {
      p.erase("category_id");
      p.erase("personalized_explanation");
    }
  }
  return document;
}

Json question_json(const Question& question) {
  return to_json(ResourceDocument{Quiz{{question}}})["questions"][0];
}

using Params = std::vector<std::string>;

struct Context {
  const ApiRequest& request;
  std::optional<Credentials> user;
  bool teacher_mode = false;
};

class Handlers {
public:
  Handlers(Repository& repo, const ServiceOptions& options, const TokenSigner& tokens)
      : repo_(repo), options_(options), tokens_(tokens) {}

  ApiResponse dispatch(const Context& ctx) const;

private:
  using Method = ApiResponse (Handlers::*)(const Context&, const Params&) const;
  struct Route {
    const char* method;
    std::vector<std::string> pattern;
    Method handler;
  };

  static const std::vector<Route>& routes();

  void require(const Context& ctx, Action action, const std::string& locale = {}) const {
    if (is_allowed(action, ctx.user, ctx.teacher_mode, locale)) return;
    if (ctx.user) throw ApiError{403, "FORBIDDEN", "role '" + std::string(to_string(ctx.user->role)) +
                                                       "' may not " + std::string(to_string(action))};
    if (action == Action::ReadPedagogicalSupport) {
      throw ApiError{403, "TEACHER_MODE_REQUIRED", "pedagogical support requires teacher mode"};
    }
    throw ApiError{401, "UNAUTHENTICATED", "a bearer token is required"};
  }

  static Json body_object(const Context& ctx) {
    if (ctx.request.body.empty()) return Json::object();
    Json json = parse_json(ctx.request.body);
    if (!json.is_object()) throw Error(ErrorCode::ParseError, "body: expected object");
    return json;
  }

  std::uint64_t seed_or_fresh(const Json* seed, const std::string& where) const {
    if (seed && !seed->is_null()) return parse_seed(*seed, where);
    return options_.seed_source();
  }

  static ResourceKind kind_param(const std::string& text) {
    auto kind = parse_resource_kind(text);
    if (!kind) throw ApiError{404, "NOT_FOUND", "unknown resource kind '" + text + "'"};
    return *kind;
  }

  static const ModuleDescriptor& module_or_404(const Catalog& c, const std::string& id) {
    const ModuleDescriptor* module = c.find_module(id);
    if (!module) throw ApiError{404, "NOT_FOUND", "unknown module '" + id + "'"};
    return *module;
  }

  static std::string locale_or_source(const std::optional<std::string>& lang,
                                      const ModuleDescriptor& module) {
    return lang ? *lang : module.source_locale;
  }

  std::optional<std::string> query(const Context& ctx, const char* key) const {
    auto it = ctx.request.query.find(key);
    if (it == ctx.request.query.end()) return std::nullopt;
    return it->second;
  }

  ApiResponse login(const Context& ctx, const Params&) const;
  ApiResponse languages(const Context& ctx, const Params&) const;
  ApiResponse catalog(const Context& ctx, const Params&) const;
  ApiResponse resource(const Context& ctx, const Params&) const;
  ApiResponse quiz_session(const Context& ctx, const Params&) const;
  ApiResponse page_question(const Context& ctx, const Params&) const;
  ApiResponse answers(const Context& ctx, const Params&) const;
  ApiResponse association_check(const Context& ctx, const Params&) const;
  ApiResponse memo_deck(const Context& ctx, const Params&) const;
  ApiResponse memo_match(const Context& ctx, const Params&) const;
  ApiResponse asset(const Context& ctx, const Params&) const;

  ApiResponse put_module(const Context& ctx, const Params&) const;
  ApiResponse get_module(const Context& ctx, const Params&) const;
  ApiResponse delete_module(const Context& ctx, const Params&) const;
  ApiResponse put_resource(const Context& ctx, const Params&) const;
  ApiResponse get_resource(const Context& ctx, const Params&) const;
  ApiResponse delete_resource(const Context& ctx, const Params&) const;
  ApiResponse put_variant(const Context& ctx, const Params&) const;
  ApiResponse get_variant(const Context& ctx, const Params&) const;
  ApiResponse upload_asset(const Context& ctx, const Params&) const;
  ApiResponse add_language(const Context& ctx, const Params&) const;
  ApiResponse create_user(const Context& ctx, const Params&) const;
  ApiResponse list_users(const Context& ctx, const Params&) const;
  ApiResponse validate(const Context& ctx, const Params&) const;
  ApiResponse export_pack(const Context& ctx, const Params&) const;
  ApiResponse translations(const Context& ctx, const Params&) const;

  Repository& repo_;
  const ServiceOptions& options_;
  const TokenSigner& tokens_;
};

const std::vector<Handlers::Route>& Handlers::routes() {
  static const std::vector<Route> table = {
      {"POST", {"auth", "login"}, &Handlers::login},
      {"GET", {"languages"}, &Handlers::languages},
      {"GET", {"modules"}, &Handlers::catalog},
      {"GET", {"modules", ":", "resources", ":"}, &Handlers::resource},
      {"POST", {"modules", ":", "quiz-session"}, &Handlers::quiz_session},
      {"POST", {"modules", ":", "page-question"}, &Handlers::page_question},
      {"POST", {"modules", ":", "answers"}, &Handlers::answers},
      {"POST", {"modules", ":", "association-check"}, &Handlers::association_check},
      {"GET", {"modules", ":", "memo-deck"}, &Handlers::memo_deck},
      {"POST", {"modules", ":", "memo-match"}, &Handlers::memo_match},
      {"GET", {"assets", ":"}, &Handlers::asset},
      {"PUT", {"authoring", "modules", ":"}, &Handlers::put_module},
      {"GET", {"authoring", "modules", ":"}, &Handlers::get_module},
      {"DELETE", {"authoring", "modules", ":"}, &Handlers::delete_module},
      {"PUT", {"authoring", "modules", ":", "resources", ":"}, &Handlers::put_resource},
      {"GET", {"authoring", "modules", ":", "resources", ":"}, &Handlers::get_resource},
      {"DELETE", {"authoring", "modules", ":", "resources", ":"}, &Handlers::delete_resource},
      {"PUT", {"authoring", "modules", ":", "variants", ":", ":"}, &Handlers::put_variant},
      {"GET", {"authoring", "modules", ":", "variants", ":", ":"}, &Handlers::get_variant},
      {"POST", {"authoring", "assets"}, &Handlers::upload_asset},
      {"POST", {"authoring", "languages"}, &Handlers::add_language},
      {"POST", {"authoring", "users"}, &Handlers::create_user},
      {"GET", {"authoring", "users"}, &Handlers::list_users},
      {"GET", {"authoring", "validate"}, &Handlers::validate},
      {"GET", {"export", "pack"}, &Handlers::export_pack},
      {"GET", {"reports", "translations"}, &Handlers::translations},
  };
  return table;
}

ApiResponse Handlers::dispatch(const Context& ctx) const {
  const auto segments = split_path(ctx.request.path);
  if (segments.size() < 2 || segments[0] != "api" || segments[1] != "v1") {
    throw ApiError{404, "NOT_FOUND", "no route for " + ctx.request.path};
  }
  bool path_matched = false;
  for (const auto& route : routes()) {
    if (route.pattern.size() + 2 != segments.size()) continue;
    Params params;
    bool match = true;
    for (std::size_t i = 0; i < route.pattern.size() && match; ++i) {
      const std::string& segment = segments[i + 2];
      if (route.pattern[i] == ":") {
        params.push_back(segment);
      } else {
        match = route.pattern[i] == segment;
      }
    }
    if (!match) continue;
    path_matched = true;
    if (ctx.request.method == route.method) return (this->*route.handler)(ctx, params);
  }
  if (path_matched) {
    throw ApiError{405, "METHOD_NOT_ALLOWED", ctx.request.method + " is not supported on " + ctx.request.path};
  }
  throw ApiError{404, "NOT_FOUND", "no route for " + ctx.request.path};
}

ApiResponse Handlers::login(const Context& ctx, const Params&) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string login = r.string("login");
  const std::string password = r.string("password");
  r.finish();
  auto user = repo_.verify_credentials(login, password);
  if (!user) throw ApiError{401, "UNAUTHENTICATED", "unknown login or wrong password"};
  return json_response(200, {{"token", tokens_.issue(*user)},
                             {"login", user->login},
                             {"role", std::string(to_string(user->role))},
                             {"locale_grants", user->locale_grants},
                             {"expires_in", options_.token_ttl.count()}});
}

ApiResponse Handlers::languages(const Context&, const Params&) const {
  return json_response(200, repo_.read([](const Catalog& c) { return languages_to_json(c.languages); }));
}

ApiResponse Handlers::catalog(const Context& ctx, const Params&) const {
  const auto lang = query(ctx, "lang");
  Json modules = repo_.read([&](const Catalog& c) {
    Json out = Json::array();
    for (const auto& [id, module] : c.modules) {
      const std::string locale = locale_or_source(lang, module);
      const ResolvedTitle title = resolve_module_title(c, module, locale);
      Json resources = Json::array();
      Json memo_modes = Json::array();
      for (const auto& [kind, document] : module.resources) {
        if (kind == ResourceKind::PedagogicalSupport) continue;
        const Resolved resolved = resolve(c, id, kind, locale);
        resources.push_back({{"kind", std::string(to_string(kind))},
                             {"resolved_locale", resolved.resolved_locale},
                             {"fallback_used", resolved.fallback_used}});
        if (const auto* memo = std::get_if<MemoSet>(resolved.document)) {
          for (auto mode : memo->enabled_modes) memo_modes.push_back(std::string(to_string(mode)));
        }
      }
      Json entry = {{"module_id", id},
                    {"category", std::string(to_string(module.category))},
                    {"title", title.title},
                    {"title_locale", title.resolved_locale},
                    {"fallback_used", title.fallback_used},
                    {"source_locale", module.source_locale},
                    {"playable_count", count_playable_resources(module)},
                    {"resources", std::move(resources)}};
      if (!memo_modes.empty()) entry["memo_modes"] = std::move(memo_modes);
      out.push_back(std::move(entry));
    }
    return out;
  });
  Json body = {{"modules", std::move(modules)}};
  if (lang) body["lang"] = *lang;
  return json_response(200, body);
}

ApiResponse Handlers::resource(const Context& ctx, const Params& p) const {
  const ResourceKind kind = kind_param(p[1]);
  require(ctx, kind == ResourceKind::PedagogicalSupport ? Action::ReadPedagogicalSupport
                                                        : Action::ReadLearnerContent);
  const auto lang = query(ctx, "lang");
  return json_response(200, repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    if (!module.resources.count(kind)) {
      throw ApiError{404, "NOT_FOUND", "module '" + p[0] + "' has no " + p[1]};
    }
    const std::string locale = locale_or_source(lang, module);
    const Resolved resolved = resolve(c, p[0], kind, locale);
    return Json{{"module_id", p[0]},
                {"kind", p[1]},
                {"requested_locale", locale},
                {"resolved_locale", resolved.resolved_locale},
                {"fallback_used", resolved.fallback_used},
                {"document", scrubbed(kind, to_json(*resolved.document))}};
  }));
}

namespace served {

struct Quizzes {
  Quiz quiz;
  std::optional<Lesson> lesson;
  std::string requested;
  std::string resolved_locale;
  bool fallback_used = false;
};

Quizzes load(const Catalog& c, const ModuleDescriptor& module, const std::string& locale) {
  if (!module.resources.count(ResourceKind::Quiz)) {
    throw ApiError{422, "NO_QUIZ", "module '" + module.module_id + "' has no quiz"};
  }
  Quizzes out;
  out.requested = locale;
  const Resolved quiz = resolve(c, module.module_id, ResourceKind::Quiz, locale);
  out.quiz = std::get<Quiz>(*quiz.document);
  out.resolved_locale = quiz.resolved_locale;
  out.fallback_used = quiz.fallback_used;
  if (module.resources.count(ResourceKind::Lesson)) {
    out.lesson = std::get<Lesson>(*resolve(c, module.module_id, ResourceKind::Lesson, locale).document);
  }
  return out;
}

// Links that do not resolve in the served quiz are ignored.
std::vector<PageLinks> links(const Quizzes& q) {
  std::vector<PageLinks> out;
  if (!q.lesson) return out;
  for (auto page : page_links_of(*q.lesson)) {
    std::erase_if(page.linked_question_ids, [&](const std::string& id) { return q.quiz.find(id) == nullptr; });
    out.push_back(std::move(page));
  }
  return out;
}

}  // namespace served

ApiResponse Handlers::quiz_session(const Context& ctx, const Params& p) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  std::set<std::string> answered;
  if (r.optional("answered_ids")) answered = to_set(r.string_array("answered_ids"));
  const std::uint64_t seed = seed_or_fresh(r.optional("seed"), "body.seed");
  const auto lang = r.optional_string("lang");
  std::size_t target = kDefaultSessionSize;
  if (r.optional("target_count")) {
    const auto value = r.integer("target_count");
    if (value < 1) throw Error(ErrorCode::InvalidArgument, "body.target_count: must be positive");
    target = static_cast<std::size_t>(value);
  }
  const bool shuffle = r.optional("shuffle_propositions") ? r.boolean("shuffle_propositions") : true;
  r.finish();

  const served::Quizzes q = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    return served::load(c, module, locale_or_source(lang, module));
  });
  const QuizSession session = generate_quiz_session({q.quiz, served::links(q), answered, seed, target});
  const Quiz presented = shuffle ? shuffle_propositions(q.quiz, seed) : q.quiz;
  Json questions = Json::array();
  for (const auto& id : session.question_ids) {
    Json question = question_json(*presented.find(id));
    scrub_question(question);
    questions.push_back(std::move(question));
  }
  return json_response(200, {{"module_id", p[0]},
                             {"seed", std::to_string(seed)},
                             {"requested_locale", q.requested},
                             {"resolved_locale", q.resolved_locale},
                             {"fallback_used", q.fallback_used},
                             {"question_ids", session.question_ids},
                             {"covered_page_ids", session.covered_page_ids},
                             {"questions", std::move(questions)}});
}

ApiResponse Handlers::page_question(const Context& ctx, const Params& p) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string page_id = r.string("page_id");
  std::set<std::string> answered;
  if (r.optional("answered_ids")) answered = to_set(r.string_array("answered_ids"));
  const std::uint64_t seed = seed_or_fresh(r.optional("seed"), "body.seed");
  const auto lang = r.optional_string("lang");
  r.finish();

  const served::Quizzes q = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    return served::load(c, module, locale_or_source(lang, module));
  });
  std::vector<Question> pool;
  bool found = false;
  for (const auto& page : served::links(q)) {
    if (page.page_id != page_id) continue;
    found = true;
    for (const auto& id : page.linked_question_ids) pool.push_back(*q.quiz.find(id));
  }
  if (!found) throw ApiError{404, "NOT_FOUND", "unknown page '" + page_id + "'"};
  Json question = question_json(pick_page_question(pool, answered, seed));
  scrub_question(question);
  return json_response(200, {{"module_id", p[0]},
                             {"page_id", page_id},
                             {"seed", std::to_string(seed)},
                             {"resolved_locale", q.resolved_locale},
                             {"fallback_used", q.fallback_used},
                             {"question", std::move(question)}});
}

ApiResponse Handlers::answers(const Context& ctx, const Params& p) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string question_id = r.string("question_id");
  const auto selected = to_set(r.string_array("selected_ids"));
  const auto lang = r.optional_string("lang");
  r.finish();

  const served::Quizzes q = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    return served::load(c, module, locale_or_source(lang, module));
  });
  const Question* question = q.quiz.find(question_id);
  if (!question) throw Error(ErrorCode::UnknownQuestion, "unknown question '" + question_id + "'");
  return json_response(200, to_json(evaluate_answer(*question, selected)));
}

ApiResponse Handlers::association_check(const Context& ctx, const Params& p) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string proposition_id = r.string("proposition_id");
  const std::string category_id = r.string("category_id");
  const auto lang = r.optional_string("lang");
  r.finish();

  const AssociationGame game = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    if (!module.resources.count(ResourceKind::AssociationGame)) {
      throw ApiError{404, "NOT_FOUND", "module '" + p[0] + "' has no association game"};
    }
    return std::get<AssociationGame>(
        *resolve(c, p[0], ResourceKind::AssociationGame, locale_or_source(lang, module)).document);
  });
  const AssociationFeedback feedback = check_association(game, proposition_id, category_id);
  Json out = {{"correct", feedback.correct}};
  if (feedback.explanation) out["explanation"] = *feedback.explanation;
  return json_response(200, out);
}

namespace {

struct ServedMemo {
  MemoSet memo;
  std::string resolved_locale;
  bool fallback_used = false;
};

MemoMode mode_param(const std::string& text) {
  auto mode = parse_memo_mode(text);
  if (!mode) throw Error(ErrorCode::InvalidArgument, "unknown memo mode '" + text + "'");
  return *mode;
}

}  // namespace

ApiResponse Handlers::memo_deck(const Context& ctx, const Params& p) const {
  const auto mode_text = query(ctx, "mode");
  if (!mode_text) throw Error(ErrorCode::InvalidArgument, "query parameter 'mode' is required");
  const MemoMode mode = mode_param(*mode_text);
  const auto seed_text = query(ctx, "seed");
  const std::uint64_t seed = seed_text ? parse_seed_text(*seed_text, "seed") : options_.seed_source();
  const auto lang = query(ctx, "lang");

  const ServedMemo memo = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    if (!module.resources.count(ResourceKind::MemoSet)) {
      throw ApiError{404, "NOT_FOUND", "module '" + p[0] + "' has no memo set"};
    }
    const Resolved r = resolve(c, p[0], ResourceKind::MemoSet, locale_or_source(lang, module));
    return ServedMemo{std::get<MemoSet>(*r.document), r.resolved_locale, r.fallback_used};
  });
  const MemoDeck deck = derive_memo_deck(memo.memo, mode, seed);
  Json cards = to_json(deck)["cards"];
  for (auto& card : cards) card.erase("pair_key");
  return json_response(200, {{"module_id", p[0]},
                             {"mode", std::string(to_string(mode))},
                             {"seed", std::to_string(seed)},
                             {"resolved_locale", memo.resolved_locale},
                             {"fallback_used", memo.fallback_used},
                             {"cards", std::move(cards)}});
}

ApiResponse Handlers::memo_match(const Context& ctx, const Params& p) const {
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const MemoMode mode = mode_param(r.string("mode"));
  const std::uint64_t seed = parse_seed(r.required("seed"), "body.seed");
  const auto lang = r.optional_string("lang");
  const std::string a = r.string("card_a");
  const std::string b = r.string("card_b");
  r.finish();

  const MemoSet memo = repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    if (!module.resources.count(ResourceKind::MemoSet)) {
      throw ApiError{404, "NOT_FOUND", "module '" + p[0] + "' has no memo set"};
    }
    return std::get<MemoSet>(
        *resolve(c, p[0], ResourceKind::MemoSet, locale_or_source(lang, module)).document);
  });
  const MemoDeck deck = derive_memo_deck(memo, mode, seed);
  return json_response(200, {{"match", check_memo_match(deck, a, b)}});
}

ApiResponse Handlers::asset(const Context&, const Params& p) const {
  auto asset = repo_.get_asset(p[0]);
  if (!asset) throw ApiError{404, "NOT_FOUND", "unknown asset '" + p[0] + "'"};
  return {200, asset->media_type, std::move(asset->bytes)};
}

// --- authoring --------------------------------------------------------------

ApiResponse Handlers::put_module(const Context& ctx, const Params& p) const {
  require(ctx, Action::WriteSource);
  const ModuleDescriptor module = module_from_json(body_object(ctx));
  if (module.module_id != p[0]) {
    throw Error(ErrorCode::InvalidArgument, "body module_id does not match the path");
  }
  repo_.put_module(module);
  Json revisions = Json::object();
  for (const auto& [kind, document] : module.resources) {
    revisions[std::string(to_string(kind))] = repo_.revision(p[0], kind).revision_number;
  }
  return json_response(200, {{"module_id", p[0]}, {"revisions", std::move(revisions)}});
}

ApiResponse Handlers::get_module(const Context& ctx, const Params& p) const {
  require(ctx, Action::ReadAuthoring);
  return json_response(200, repo_.read([&](const Catalog& c) {
    const ModuleDescriptor& module = module_or_404(c, p[0]);
    return Json{{"module", to_json(module)}, {"header", module_header_to_json(module, c)}};
  }));
}

ApiResponse Handlers::delete_module(const Context& ctx, const Params& p) const {
  require(ctx, Action::WriteSource);
  repo_.delete_module(p[0]);
  return json_response(200, {{"deleted", p[0]}});
}

ApiResponse Handlers::put_resource(const Context& ctx, const Params& p) const {
  require(ctx, Action::WriteSource);
  const ResourceKind kind = kind_param(p[1]);
  const ResourceDocument document = document_from_json(kind, body_object(ctx));
  repo_.put_resource(p[0], document);
  const Revision revision = repo_.revision(p[0], kind);
  return json_response(200, {{"module_id", p[0]},
                             {"kind", p[1]},
                             {"revision", revision.revision_number},
                             {"timestamp", revision.timestamp}});
}

ApiResponse Handlers::get_resource(const Context& ctx, const Params& p) const {
  require(ctx, Action::ReadAuthoring);
  const ResourceKind kind = kind_param(p[1]);
  const StoredResource stored = repo_.get_resource(p[0], kind);
  const Revision revision = repo_.revision(p[0], kind);
  return json_response(200, {{"module_id", p[0]},
                             {"kind", p[1]},
                             {"revision", stored.revision},
                             {"timestamp", revision.timestamp},
                             {"document", to_json(stored.document)}});
}

ApiResponse Handlers::delete_resource(const Context& ctx, const Params& p) const {
  require(ctx, Action::WriteSource);
  const ResourceKind kind = kind_param(p[1]);
  repo_.delete_resource(p[0], kind);
  return json_response(200, {{"deleted", p[0] + "/" + p[1]}});
}

ApiResponse Handlers::put_variant(const Context& ctx, const Params& p) const {
  const std::string& locale = p[1];
  require(ctx, Action::WriteVariant, locale);
  const ResourceKind kind = kind_param(p[2]);
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  VariantInput input;
  input.module_id = p[0];
  input.kind = kind;
  input.locale = locale;
  const std::string status_text = r.string("status");
  const auto status = parse_variant_status(status_text);
  if (!status) throw Error(ErrorCode::InvalidArgument, "body.status: unknown status '" + status_text + "'");
  input.status = *status;
  input.document = document_from_json(kind, r.required("document"));
  input.module_title = r.optional_string("module_title");
  r.finish();
  return json_response(200, to_json(repo_.upsert_variant(std::move(input))));
}

ApiResponse Handlers::get_variant(const Context& ctx, const Params& p) const {
  require(ctx, Action::ReadAuthoring);
  const ResourceKind kind = kind_param(p[2]);
  return json_response(200, repo_.read([&](const Catalog& c) {
    auto it = c.variants.find({p[0], kind, p[1]});
    if (it == c.variants.end()) {
      throw ApiError{404, "NOT_FOUND", "no " + p[2] + " variant in '" + p[1] + "' for '" + p[0] + "'"};
    }
    return to_json(it->second);
  }));
}

ApiResponse Handlers::upload_asset(const Context& ctx, const Params&) const {
  require(ctx, Action::WriteAsset);
  auto type = ctx.request.headers.find("content-type");
  if (type == ctx.request.headers.end() || is_blank(type->second)) {
    throw Error(ErrorCode::InvalidArgument, "Content-Type is required");
  }
  if (ctx.request.body.empty()) throw Error(ErrorCode::InvalidArgument, "asset body is empty");
  const std::string id = repo_.put_asset(type->second, ctx.request.body);
  return json_response(201, {{"asset_id", id},
                             {"media_type", type->second},
                             {"size", ctx.request.body.size()}});
}

ApiResponse Handlers::add_language(const Context& ctx, const Params&) const {
  require(ctx, Action::AddLanguage);
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string code = r.string("code");
  const std::string name = r.string("display_name");
  r.finish();
  repo_.add_language(code, name);
  return json_response(201, {{"code", code}, {"display_name", name}});
}

ApiResponse Handlers::create_user(const Context& ctx, const Params&) const {
  require(ctx, Action::ManageUsers);
  const Json body = body_object(ctx);
  ObjectReader r(body, "body");
  const std::string login = r.string("login");
  const std::string password = r.string("password");
  const std::string role_text = r.string("role");
  std::set<std::string> grants;
  if (r.optional("locale_grants")) grants = to_set(r.string_array("locale_grants"));
  r.finish();
  const auto role = parse_role(role_text);
  if (!role) throw Error(ErrorCode::InvalidArgument, "body.role: unknown role '" + role_text + "'");
  repo_.create_user(login, password, *role, grants);
  return json_response(201, {{"login", login}, {"role", role_text}, {"locale_grants", grants}});
}

ApiResponse Handlers::list_users(const Context& ctx, const Params&) const {
  require(ctx, Action::ManageUsers);
  Json out = Json::array();
  for (const auto& user : repo_.list_users()) {
    out.push_back({{"login", user.login},
                   {"role", std::string(to_string(user.role))},
                   {"locale_grants", user.locale_grants}});
  }
  return json_response(200, out);
}

ApiResponse Handlers::validate(const Context& ctx, const Params&) const {
  require(ctx, Action::ReadAuthoring);
  return json_response(200, to_json(repo_.validate()));
}

ApiResponse Handlers::export_pack(const Context& ctx, const Params&) const {
  require(ctx, Action::ExportPack);
  std::optional<std::set<std::string>> locales;
  if (auto langs = query(ctx, "langs")) {
    locales.emplace();
    std::size_t start = 0;
    while (start <= langs->size()) {
      auto end = langs->find(',', start);
      if (end == std::string::npos) end = langs->size();
      if (end > start) locales->insert(langs->substr(start, end - start));
      start = end + 1;
    }
  }
  return {200, "application/x-tar", repo_.export_pack(locales)};
}

ApiResponse Handlers::translations(const Context& ctx, const Params&) const {
  require(ctx, Action::ReadReports);
  return json_response(200, to_json(repo_.completeness()));
}

}  // namespace

Service::Service(Repository& repo, ServiceOptions options)
    : repo_(repo),
      options_(std::move(options)),
      tokens_(options_.token_secret, options_.token_ttl, options_.clock) {
  if (!options_.seed_source) {
    options_.seed_source = [] {
      static std::random_device device;
      return (static_cast<std::uint64_t>(device()) << 32) ^ device();
    };
  }
}

ApiResponse Service::handle(const ApiRequest& request) const {
  try {
    Context ctx{request, std::nullopt, false};
    auto auth = request.headers.find("authorization");
    if (auth != request.headers.end()) {
      constexpr std::string_view kBearer = "Bearer ";
      if (auth->second.rfind(kBearer, 0) != 0) {
        throw ApiError{401, "UNAUTHENTICATED", "expected a bearer token"};
      }
      ctx.user = tokens_.verify(std::string_view(auth->second).substr(kBearer.size()));
      if (!ctx.user) throw ApiError{401, "UNAUTHENTICATED", "invalid or expired token"};
    }
    auto teacher = request.headers.find("x-teacher-mode");
    ctx.teacher_mode = ctx.user.has_value() ||
                       (teacher != request.headers.end() && teacher->second == "true");
    return Handlers(repo_, options_, tokens_).dispatch(ctx);
  } catch (const ApiError& e) {
    return error_response(e.status, e.code, e.message);
  } catch (const ValidationError& e) {
    return error_response(422, "VALIDATION_FAILED", e.what(), &e.report());
  } catch (const Error& e) {
    auto [status, code] = classify(e.code());
    return error_response(status, code, e.what());
  } catch (const std::exception& e) {
    return error_response(500, "INTERNAL_ERROR", e.what());
  }
}

}  // namespace saphir
