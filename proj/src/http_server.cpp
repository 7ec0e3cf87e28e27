#include "saphir/http_server.hpp"

#include <httplib.h>

#include <cctype>
#include <charconv>

namespace saphir {

struct HttpServer::Impl {
  const Service& service;
  httplib::Server server;
};

namespace {

std::string lowercase(std::string text) {
  for (auto& ch : text) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return text;
}

}  // namespace

HttpServer::HttpServer(const Service& service) : impl_(new Impl{service, {}}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    for (const auto& [key, value] : req.headers) request.headers.emplace(lowercase(key), value);
    request.body = req.body;
    ApiResponse response = impl_->service.handle(request);
    res.status = response.status;
    res.set_content(std::move(response.body), response.content_type);
  };
  const char* any = R"(/.*)";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.Put(any, handler);
  impl_->server.Delete(any, handler);
  impl_->server.set_payload_max_length(64u << 20);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : impl_->server.bind_to_port(host, port) ? port : -1;
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

std::pair<std::string, int> parse_bind_address(std::string_view text, int default_port) {
  const auto colon = text.rfind(':');
  std::string host(colon == std::string_view::npos ? text : text.substr(0, colon));
  if (host.empty()) host = "127.0.0.1";
  int port = default_port;
  if (colon != std::string_view::npos) {
    const auto digits = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 ||
        port > 65535) {
      throw Error(ErrorCode::InvalidArgument, "bad bind address '" + std::string(text) + "'");
    }
  }
  return {host, port};
}

}  // namespace saphir
