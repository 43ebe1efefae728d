#pragma once

#include <optional>
#include <string>

#include "tessera/store/store.hpp"

namespace tessera::store {

struct RemoteStoreOptions {
  std::string query_endpoint;
  std::string update_endpoint;
  std::optional<std::string> username;
  std::optional<std::string> password;
  int timeout_seconds = 30;
};

/// SPARQL 1.1 Protocol client. Queries are POSTed as application/sparql-query
/// and read back as application/sparql-results+json; updates are POSTed as
/// application/sparql-update. Nothing is cached between calls.
///
/// Connection failures, timeouts and non-2xx responses raise TransportError,
/// except HTTP 400, which the endpoint uses for rejected queries and which
/// raises QueryError carrying the query text.
class RemoteStore final : public StoreBackend {
 public:
  explicit RemoteStore(RemoteStoreOptions options);

  SolutionTable select(std::string_view query) override;
  bool ask(std::string_view query) override;
  void update(std::string_view update) override;

  const RemoteStoreOptions& options() const noexcept { return options_; }

 private:
  std::string post(const std::string& endpoint, std::string_view body, const char* content_type,
                   const char* accept);

  RemoteStoreOptions options_;
};

/// Decodes an application/sparql-results+json SELECT document.
SolutionTable parse_sparql_results(std::string_view json);
/// Decodes the boolean of an ASK result document.
bool parse_sparql_boolean(std::string_view json);

}  // namespace tessera::store
