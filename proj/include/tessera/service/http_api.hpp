#pragma once

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>

#include "tessera/service/engine.hpp"

namespace tessera::service {

/// JSON term encoding: {"type": "iri"|"literal", "value", "datatype"?, "language"?}.
/// Decoding also accepts "uri" for IRIs and rejects blank nodes.
nlohmann::json term_to_json(const rdf::Term& term);
rdf::Term term_from_json(const nlohmann::json& j);

nlohmann::json snapshot_to_json(const prov::Snapshot& s);
nlohmann::json violation_to_json(const shapes::Violation& v);
nlohmann::json error_to_json(const ApiError& e);

struct HttpRequest {
  std::string method;
  std::string target;  // raw path and query, still percent-encoded
  std::string body;
  std::optional<std::string> curator;  // X-Curator header
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Routes /api requests onto an Engine. Independent of any socket layer.
class HttpApi {
 public:
  explicit HttpApi(Engine& engine) : engine_(engine) {}

  HttpResponse handle(const HttpRequest& req);

 private:
  nlohmann::json route(const HttpRequest& req, int& status);

  Engine& engine_;
};

/// Decodes %XX escapes; '+' stays literal. Throws ApiError(400) on a bad escape.
std::string percent_decode(std::string_view text);

/// Blocking HTTP server over HttpApi with an access log.
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();

  /// Binds without serving; port 0 picks a free port. Returns the bound port.
  /// Throws TransportError when the address cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tessera::service
