// Operator command line for a content repository.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or I/O error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <sodium.h>

#include "saphir/http_server.hpp"
#include "saphir/localization.hpp"
#include "saphir/pack.hpp"
#include "saphir/sample.hpp"
#include "saphir/service.hpp"
#include "saphir/store.hpp"

namespace {

using namespace saphir;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct Options {
  std::string repo;
  std::string format = "text";

  bool json() const { return format == "json"; }
};

std::unique_ptr<Repository> open_repo(const Options& opts, bool read_only) {
  if (opts.repo.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no repository: pass --repo or set SAPHIR_DATA_DIR");
  }
  RepositoryOptions ro;
  ro.read_only = read_only;
  return Repository::open(opts.repo, ro);
}

void emit(const Json& json) { std::cout << canonical_dump(json); }

std::string read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_binary(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

void print_report(const ValidationReport& report) {
  for (const auto& v : report.violations) {
    std::cout << to_string(v.code) << " " << v.path.str() << ": " << v.message << "\n";
  }
  std::cout << (report.is_valid() ? "valid" : std::to_string(report.violations.size()) + " violation(s)")
            << "\n";
}

void print_stats(const PackStats& stats) {
  std::cout << "modules    " << stats.module_count << "\n"
            << "resources  " << stats.resource_count << "\n"
            << "languages  " << stats.language_count << "\n"
            << "categories " << stats.category_count() << "\n";
  for (const auto& [category, count] : stats.modules_per_category) {
    std::cout << "  " << to_string(category) << " " << count << "\n";
  }
}

int cmd_init(const Options& opts, const std::string& dir) {
  Repository::init(dir);
  if (opts.json()) {
    emit({{"initialized", dir}});
  } else {
    std::cout << "initialized " << dir << "\n";
  }
  return kOk;
}

int cmd_validate(const Options& opts, const std::string& module_id) {
  auto repo = open_repo(opts, true);
  ValidationReport report = repo->validate();
  if (!module_id.empty()) {
    if (!repo->read([&](const Catalog& c) { return c.find_module(module_id) != nullptr; })) {
      throw Error(ErrorCode::UnknownModule, "unknown module '" + module_id + "'");
    }
    std::erase_if(report.violations, [&](const Violation& v) {
      return v.path.segments().empty() || v.path.segments().front() != module_id;
    });
    report.subject = Path{{module_id}};
  }
  if (opts.json()) {
    emit(to_json(report));
  } else {
    print_report(report);
  }
  return report.is_valid() ? kOk : kInvalid;
}

int cmd_export(const Options& opts, const std::string& out, const std::vector<std::string>& langs) {
  auto repo = open_repo(opts, true);
  std::optional<std::set<std::string>> locales;
  if (!langs.empty()) locales.emplace(langs.begin(), langs.end());
  const std::string bytes = repo->export_pack(locales);
  write_binary(out, bytes);
  const PackStats stats = read_pack(bytes).stats;
  if (opts.json()) {
    emit({{"out", out}, {"bytes", bytes.size()}, {"stats", to_json(stats)}});
  } else {
    std::cout << "wrote " << out << " (" << bytes.size() << " bytes)\n";
    print_stats(stats);
  }
  return kOk;
}

int cmd_import(const Options& opts, const std::string& pack) {
  const std::string bytes = read_binary(pack);
  auto repo = open_repo(opts, false);
  const ImportReport report = repo->import_pack(bytes);
  if (opts.json()) {
    emit(to_json(report));
  } else {
    std::cout << "created " << report.created << ", updated " << report.updated << ", skipped "
              << report.skipped << "\n";
  }
  return kOk;
}

int cmd_report(const Options& opts) {
  auto repo = open_repo(opts, true);
  const CompletenessReport report = repo->completeness();
  if (opts.json()) {
    emit(to_json(report));
    return kOk;
  }
  for (const auto& [locale, row] : report.locales) {
    std::ostringstream coverage;
    coverage.precision(1);
    coverage << std::fixed << row.coverage * 100.0;
    std::cout << locale << "  " << coverage.str() << "%  complete " << row.counts.complete
              << ", draft " << row.counts.draft << ", stale " << row.counts.stale << ", missing "
              << row.counts.missing << "\n";
  }
  return kOk;
}

int cmd_stats(const Options& opts) {
  auto repo = open_repo(opts, true);
  const PackStats stats = repo->stats();
  if (opts.json()) {
    emit(to_json(stats));
  } else {
    print_stats(stats);
  }
  return kOk;
}

std::string read_password() {
  if (const char* env = std::getenv("SAPHIR_PASSWORD")) return env;
  std::string line;
  std::getline(std::cin, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int cmd_user_add(const Options& opts, const std::string& login, const std::string& role_text,
                 const std::vector<std::string>& locales) {
  const auto role = parse_role(role_text);
  if (!role) throw Error(ErrorCode::InvalidArgument, "unknown role '" + role_text + "'");
  const std::string password = read_password();
  auto repo = open_repo(opts, false);
  repo->create_user(login, password, *role, {locales.begin(), locales.end()});
  if (opts.json()) {
    emit({{"login", login}, {"role", role_text}, {"locale_grants", locales}});
  } else {
    std::cout << "created " << role_text << " " << login << "\n";
  }
  return kOk;
}

int cmd_user_list(const Options& opts) {
  auto repo = open_repo(opts, true);
  Json out = Json::array();
  for (const auto& user : repo->list_users()) {
    if (!opts.json()) {
      std::cout << user.login << " " << to_string(user.role);
      for (const auto& code : user.locale_grants) std::cout << " " << code;
      std::cout << "\n";
    }
    out.push_back({{"login", user.login},
                   {"role", std::string(to_string(user.role))},
                   {"locale_grants", user.locale_grants}});
  }
  if (opts.json()) emit(out);
  return kOk;
}

int cmd_lang_add(const Options& opts, const std::string& code, const std::string& name) {
  auto repo = open_repo(opts, false);
  repo->add_language(code, name);
  if (opts.json()) {
    emit({{"code", code}, {"display_name", name}});
  } else {
    std::cout << "added " << code << "\n";
  }
  return kOk;
}

int cmd_seed_sample(const Options& opts) {
  auto repo = open_repo(opts, false);
  seed_sample(*repo);
  if (opts.json()) {
    emit(to_json(repo->stats()));
  } else {
    print_stats(repo->stats());
  }
  return kOk;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const Options& opts, const std::string& bind_flag) {
  auto repo = open_repo(opts, false);
  ServiceOptions so;
  if (const char* secret = std::getenv("SAPHIR_TOKEN_SECRET"); secret && *secret) {
    so.token_secret = secret;
  } else {
    if (sodium_init() < 0) throw Error(ErrorCode::IoError, "libsodium failed to initialize");
    std::string random(32, '\0');
    randombytes_buf(random.data(), random.size());
    so.token_secret = random;
    std::cerr << "warning: SAPHIR_TOKEN_SECRET is not set; tokens will not survive a restart\n";
  }
  if (const char* ttl = std::getenv("SAPHIR_TOKEN_TTL_SECS"); ttl && *ttl) {
    try {
      so.token_ttl = std::chrono::seconds(std::stoll(ttl));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "SAPHIR_TOKEN_TTL_SECS must be an integer");
    }
  }
  std::string bind_text = bind_flag;
  if (bind_text.empty()) {
    const char* env = std::getenv("SAPHIR_BIND");
    bind_text = env && *env ? env : "127.0.0.1:8080";
  }
  const auto [host, port] = parse_bind_address(bind_text);

  Service service(*repo, so);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << host << ":" << bound << "\n";
  server.listen();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content repository tool"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--repo", opts.repo, "Repository directory")->envname("SAPHIR_DATA_DIR");
  app.add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::function<int()> run;

  std::string init_dir;
  auto* init = app.add_subcommand("init", "Create an empty repository");
  init->add_option("dir", init_dir, "Directory")->required();
  init->callback([&] { run = [&] { return cmd_init(opts, init_dir); }; });

  std::string bind;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--bind", bind, "host:port (default SAPHIR_BIND or 127.0.0.1:8080)");
  serve->callback([&] { run = [&] { return cmd_serve(opts, bind); }; });

  std::string module_id;
  auto* validate = app.add_subcommand("validate", "Validate the repository");
  validate->add_option("--module", module_id, "Only report this module");
  validate->callback([&] { run = [&] { return cmd_validate(opts, module_id); }; });

  std::string out;
  std::vector<std::string> langs;
  auto* exp = app.add_subcommand("export", "Write a content pack");
  exp->add_option("--out", out, "Pack file")->required();
  exp->add_option("--langs", langs, "Locales whose variants are included (default all)");
  exp->callback([&] { run = [&] { return cmd_export(opts, out, langs); }; });

  std::string pack;
  auto* imp = app.add_subcommand("import", "Merge a content pack");
  imp->add_option("pack", pack, "Pack file")->required();
  imp->callback([&] { run = [&] { return cmd_import(opts, pack); }; });

  auto* report = app.add_subcommand("report", "Reports");
  report->require_subcommand(1);
  auto* translations = report->add_subcommand("translations", "Translation completeness");
  translations->callback([&] { run = [&] { return cmd_report(opts); }; });

  auto* stats = app.add_subcommand("stats", "Module, resource and language counts");
  stats->callback([&] { run = [&] { return cmd_stats(opts); }; });

  auto* user = app.add_subcommand("user", "User administration");
  user->require_subcommand(1);
  std::string login;
  std::string role;
  std::vector<std::string> locales;
  auto* user_add = user->add_subcommand(
      "add", "Create a user; the password comes from SAPHIR_PASSWORD or stdin");
  user_add->add_option("login", login, "Login")->required();
  user_add->add_option("--role", role, "admin, designer or translator")->required();
  user_add->add_option("--locales", locales, "Granted locales (translators)");
  user_add->callback([&] { run = [&] { return cmd_user_add(opts, login, role, locales); }; });
  auto* user_list = user->add_subcommand("list", "List users");
  user_list->callback([&] { run = [&] { return cmd_user_list(opts); }; });

  auto* lang = app.add_subcommand("lang", "Languages");
  lang->require_subcommand(1);
  std::string code;
  std::string name;
  auto* lang_add = lang->add_subcommand("add", "Register a language");
  lang_add->add_option("code", code, "Language code")->required();
  lang_add->add_option("name", name, "Display name")->required();
  lang_add->callback([&] { run = [&] { return cmd_lang_add(opts, code, name); }; });

  auto* seed = app.add_subcommand("seed-sample", "Load the demonstration catalog");
  seed->callback([&] { run = [&] { return cmd_seed_sample(opts); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return run();
  } catch (const ValidationError& e) {
    if (opts.json()) {
      emit({{"error", {{"code", "validation_failure"}, {"message", e.what()}, {"report", to_json(e.report())}}}});
    } else {
      std::cerr << "error: " << e.what() << "\n";
      for (const auto& v : e.report().violations) {
        std::cerr << "  " << to_string(v.code) << " " << v.path.str() << ": " << v.message << "\n";
      }
    }
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
