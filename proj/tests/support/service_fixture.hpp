#pragma once

// A Service over a temporary repository seeded with the sample catalog, with
// one user per role and a controllable clock.

#include <chrono>
#include <memory>
#include <string>

#include "fixtures.hpp"
#include "saphir/sample.hpp"
#include "saphir/service.hpp"
#include "saphir/store.hpp"

namespace saphir::testing {

inline constexpr const char* kPassword = "correct horse battery";

struct ServiceFixture {
  TempDir dir;
  std::unique_ptr<Repository> repo;
  std::chrono::system_clock::time_point now = std::chrono::system_clock::time_point(std::chrono::seconds(1'700'000'000));
  std::unique_ptr<Service> service;

  explicit ServiceFixture(bool seeded = true) {
    RepositoryOptions options;
    options.password_cost = PasswordCost::Minimum;
    options.clock = [this] { return now; };
    repo = Repository::open(dir.path(), options);
    if (seeded) {
      seed_sample(*repo);
      repo->create_user("admin", kPassword, Role::Admin);
      repo->create_user("designer", kPassword, Role::Designer);
      repo->create_user("translator", kPassword, Role::Translator, {"es"});
    }
    ServiceOptions service_options;
    service_options.token_secret = "test secret";
    service_options.token_ttl = std::chrono::seconds(3600);
    service_options.clock = [this] { return now; };
    std::uint64_t counter = 1000;
    service_options.seed_source = [counter]() mutable { return counter++; };
    service = std::make_unique<Service>(*repo, service_options);
  }

  ApiResponse call(const std::string& method, const std::string& path, const std::string& body = "",
                   std::map<std::string, std::string> headers = {},
                   std::map<std::string, std::string> query = {}) const {
    return service->handle({method, path, std::move(query), std::move(headers), body});
  }

  std::string token_for(const std::string& login) const {
    const Json body = {{"login", login}, {"password", kPassword}};
    ApiResponse r = call("POST", "/api/v1/auth/login", body.dump());
    if (r.status != 200) return "";
    return Json::parse(r.body)["token"].get<std::string>();
  }

  std::map<std::string, std::string> bearer(const std::string& login) const {
    return {{"authorization", "Bearer " + token_for(login)}};
  }
};

inline Json body_of(const ApiResponse& r) { return Json::parse(r.body); }

inline std::string error_code(const ApiResponse& r) {
  const Json json = Json::parse(r.body, nullptr, false);
  if (!json.is_object() || !json.contains("error")) return "";
  return json["error"]["code"].get<std::string>();
}

}  // namespace saphir::testing
