#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "saphir/service.hpp"

namespace saphir {

/// Serves a Service over HTTP/1.1.
class HttpServer {
public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "host:port", "host" or ":port". Throws Error(InvalidArgument).
std::pair<std::string, int> parse_bind_address(std::string_view text, int default_port = 8080);

}  // namespace saphir
