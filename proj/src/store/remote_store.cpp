#include "tessera/store/remote_store.hpp"

#include <httplib.h>

#include <json.hpp>
#include <regex>

#include "tessera/errors.hpp"

namespace tessera::store {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/?#]+)([^#]*)$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw TransportError("not an http(s) endpoint URL: " + url);
  std::string path = m[2].str();
  if (path.empty()) path = "/";
  return {m[1].str(), path};
}

rdf::Term term_from_binding(const nlohmann::json& cell) {
  const std::string type = cell.at("type").get<std::string>();
  const std::string value = cell.at("value").get<std::string>();
  if (type == "uri") return rdf::Term::iri(value);
  if (type == "bnode") return rdf::Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    if (cell.contains("xml:lang")) return rdf::Term::literal(value, {}, cell["xml:lang"].get<std::string>());
    if (cell.contains("datatype")) return rdf::Term::literal(value, cell["datatype"].get<std::string>());
    return rdf::Term::literal(value);
  }
  throw QueryError("unknown binding type in results: " + type);
}

}  // namespace

SolutionTable parse_sparql_results(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    SolutionTable table;
    for (const auto& v : doc.at("head").at("vars")) table.variables.push_back(v.get<std::string>());
    for (const auto& binding : doc.at("results").at("bindings")) {
      std::vector<std::optional<rdf::Term>> row(table.variables.size());
      for (std::size_t i = 0; i < table.variables.size(); ++i) {
        const auto it = binding.find(table.variables[i]);
        if (it != binding.end()) row[i] = term_from_binding(*it);
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw QueryError(std::string("malformed SPARQL results document: ") + e.what());
  } catch (const InvalidTerm& e) {
    throw QueryError(std::string("bad term in SPARQL results: ") + e.what());
  }
}

bool parse_sparql_boolean(std::string_view json) {
  try {
    return nlohmann::json::parse(json).at("boolean").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw QueryError(std::string("malformed ASK result document: ") + e.what());
  }
}

RemoteStore::RemoteStore(RemoteStoreOptions options) : options_(std::move(options)) {
  split_url(options_.query_endpoint);
  split_url(options_.update_endpoint);
}

std::string RemoteStore::post(const std::string& endpoint, std::string_view body,
                              const char* content_type, const char* accept) {
  const Endpoint ep = split_url(endpoint);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  client.set_write_timeout(options_.timeout_seconds, 0);
  if (options_.username) client.set_basic_auth(*options_.username, options_.password.value_or(""));
  httplib::Headers headers;
  if (accept != nullptr) headers.emplace("Accept", accept);

  const auto res = client.Post(ep.path, headers, body.data(), body.size(), content_type);
  if (!res) {
    throw TransportError("request to " + endpoint + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 400) {
    throw QueryError("endpoint rejected request (" + res->body + "): " + std::string(body));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("endpoint " + endpoint + " answered HTTP " + std::to_string(res->status) +
                         ": " + res->body);
  }
  return res->body;
}

SolutionTable RemoteStore::select(std::string_view query) {
  return parse_sparql_results(post(options_.query_endpoint, query, "application/sparql-query",
                                   "application/sparql-results+json"));
}

bool RemoteStore::ask(std::string_view query) {
  return parse_sparql_boolean(post(options_.query_endpoint, query, "application/sparql-query",
                                   "application/sparql-results+json"));
}

void RemoteStore::update(std::string_view update) {
  if (update.empty()) return;
  post(options_.update_endpoint, update, "application/sparql-update", nullptr);
}

}  // namespace tessera::store
