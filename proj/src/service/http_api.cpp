#include "tessera/service/http_api.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>
#include <cctype>
#include <charconv>
#include <limits>
#include <tuple>
#include <regex>

#include "tessera/errors.hpp"

namespace tessera::service {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultLimit = 50;
constexpr std::size_t kMaxLimit = 1000;
const std::string kRdfLangString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

ApiError bad_request(const std::string& message) { return ApiError(400, "bad_request", message); }

json opt_term(const std::optional<rdf::Term>& t) { return t ? term_to_json(*t) : json(nullptr); }

std::string local_name(const rdf::Term& iri) {
  const std::string& v = iri.value();
  const auto cut = v.find_last_of("/#:");
  return cut == std::string::npos ? v : v.substr(cut + 1);
}

rdf::Term iri_from(const std::string& text, const std::string& what) {
  if (!rdf::is_absolute_iri(text)) throw bad_request(what + " is not an absolute IRI: '" + text + "'");
  try {
    return rdf::Term::iri(text);
  } catch (const InvalidTerm& e) {
    throw bad_request(what + ": " + e.what());
  }
}

std::uint64_t number_from(std::string_view text, const std::string& what) {
  std::uint64_t n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw bad_request(what + " must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return n;
}

std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    std::string part(q.substr(0, amp));
    q = amp == std::string_view::npos ? std::string_view() : q.substr(amp + 1);
    if (part.empty()) continue;
    std::replace(part.begin(), part.end(), '+', ' ');
    const auto eq = part.find('=');
    out[percent_decode(part.substr(0, eq))] = eq == std::string::npos ? "" : percent_decode(part.substr(eq + 1));
  }
  return out;
}

json parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw bad_request("request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ApiError(400, "bad_json", e.what());
  }
}

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw bad_request(std::string("missing field '") + key + "'");
  return *it;
}

std::optional<rdf::Term> optional_iri(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return iri_from(it->get<std::string>(), key);
  rdf::Term t = term_from_json(*it);
  if (!t.is_iri()) throw bad_request(std::string(key) + " must be an IRI");
  return t;
}

PredicateObjectList pairs_from(const json& arr) {
  if (!arr.is_array()) throw bad_request("state must be a list of {predicate, object}");
  PredicateObjectList out;
  for (const auto& item : arr) {
    if (!item.is_object()) throw bad_request("state entries must be objects");
    const json& p = field(item, "predicate");
    rdf::Term predicate = p.is_string() ? iri_from(p.get<std::string>(), "predicate") : term_from_json(p);
    if (!predicate.is_iri()) throw bad_request("predicate must be an IRI");
    out.emplace_back(std::move(predicate), term_from_json(field(item, "object")));
  }
  return out;
}

json state_to_json(const rdf::EntityState& state) {
  json arr = json::array();
  for (const auto& t : state.triples()) {
    arr.push_back({{"predicate", term_to_json(t.predicate())}, {"object", term_to_json(t.object())}});
  }
  return arr;
}

json violations_to_json(const std::vector<shapes::Violation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) arr.push_back(violation_to_json(v));
  return arr;
}

json schema_to_json(const Engine& engine) {
  std::set<rdf::Term> classes;
  for (const auto& [cls, cs] : engine.schema().classes) classes.insert(cls);
  for (const auto& c : engine.display().classes) classes.insert(c.iri);
  json out = json::array();
  for (const auto& cls : classes) {
    const auto* cd = engine.display().find_class(cls);
    json props = json::array();
    std::set<rdf::Term> seen;
    const auto sit = engine.schema().classes.find(cls);
    if (sit != engine.schema().classes.end()) {
      // Form order: sh:order first, then the display file's order, then path.
      std::vector<const shapes::PropertyConstraint*> ordered;
      for (const auto& c : sit->second) ordered.push_back(&c);
      const auto rank = [cd](const shapes::PropertyConstraint* c) {
        std::size_t pos = std::numeric_limits<std::size_t>::max();
        if (cd != nullptr) {
          for (std::size_t i = 0; i < cd->properties.size(); ++i) {
            if (cd->properties[i].path == c->path) pos = i;
          }
        }
        return std::make_tuple(c->order.value_or(std::numeric_limits<double>::infinity()), pos, c->path);
      };
      std::stable_sort(ordered.begin(), ordered.end(),
                       [&](const auto* a, const auto* b) { return rank(a) < rank(b); });
      for (const auto* cp : ordered) {
        const auto& c = *cp;
        const auto* pd = cd != nullptr ? cd->property(c.path) : nullptr;
        json p = {{"path", c.path.value()},
                  {"label", pd != nullptr ? pd->label : c.name.value_or(local_name(c.path))},
                  {"displayed", pd == nullptr || pd->displayed},
                  {"min_count", c.min_count},
                  {"max_count", c.max_count ? json(*c.max_count) : json(nullptr)},
                  {"datatype", c.datatype ? json(c.datatype->value()) : json(nullptr)},
                  {"class", c.value_class ? json(c.value_class->value()) : json(nullptr)},
                  {"in", nullptr},
                  {"order", c.order ? json(*c.order) : json(nullptr)},
                  {"order_predicate", nullptr},
                  {"computed", false}};
        if (c.allowed_values) {
          p["in"] = json::array();
          for (const auto& v : *c.allowed_values) p["in"].push_back(term_to_json(v));
        }
        if (pd != nullptr) {
          p["order_predicate"] = pd->order_predicate ? json(pd->order_predicate->value()) : json(nullptr);
          p["computed"] = pd->value_query.has_value();
        }
        props.push_back(std::move(p));
        seen.insert(c.path);
      }
    }
    if (cd != nullptr) {
      for (const auto& pd : cd->properties) {
        if (seen.count(pd.path)) continue;
        props.push_back({{"path", pd.path.value()},
                         {"label", pd.label},
                         {"displayed", pd.displayed},
                         {"min_count", 0},
                         {"max_count", nullptr},
                         {"datatype", nullptr},
                         {"class", nullptr},
                         {"in", nullptr},
                         {"order", nullptr},
                         {"order_predicate", pd.order_predicate ? json(pd.order_predicate->value()) : json(nullptr)},
                         {"computed", pd.value_query.has_value()}});
      }
    }
    out.push_back({{"iri", cls.value()}, {"label", cd != nullptr ? cd->label : local_name(cls)}, {"properties", props}});
  }
  return {{"classes", out}};
}

json entity_to_json(const EntityView& v) {
  json types = json::array();
  for (const auto& t : v.types) types.push_back(t.value());
  json props = json::array();
  for (const auto& p : v.properties) {
    json pj = {{"path", p.path.value()}, {"label", p.label}, {"values", p.values}, {"ordered", nullptr},
               {"order_error", p.order_error ? json(*p.order_error) : json(nullptr)}};
    if (p.ordered) {
      pj["ordered"] = json::array();
      for (const auto& t : *p.ordered) pj["ordered"].push_back(term_to_json(t));
    }
    props.push_back(std::move(pj));
  }
  return {{"entity", v.entity.value()},
          {"version", v.version ? json(*v.version) : json(nullptr)},
          {"deleted", v.deleted},
          {"types", types},
          {"state", state_to_json(v.state)},
          {"properties", props}};
}

const std::regex kTimeline("^(.+)/timeline$");
const std::regex kVersion("^(.+)/version/([0-9]+)$");
const std::regex kRestore("^(.+)/restore/([0-9]+)$");

ApiError method_not_allowed(const std::string& method, const std::string& path) {
  return ApiError(405, "method_not_allowed", method + " is not supported on " + path);
}

}  // namespace

json term_to_json(const rdf::Term& term) {
  if (term.is_iri()) return {{"type", "iri"}, {"value", term.value()}};
  if (term.is_blank()) return {{"type", "bnode"}, {"value", term.value()}};
  json j = {{"type", "literal"}, {"value", term.value()}};
  if (!term.language().empty()) {
    j["language"] = term.language();
  } else {
    j["datatype"] = term.datatype();
  }
  return j;
}

rdf::Term term_from_json(const json& j) {
  if (!j.is_object()) throw bad_request("a term must be an object {type, value}");
  const json& type = field(j, "type");
  const json& value = field(j, "value");
  if (!type.is_string() || !value.is_string()) throw bad_request("term type and value must be strings");
  const std::string t = type.get<std::string>();
  const std::string v = value.get<std::string>();
  if (t == "iri" || t == "uri") return iri_from(v, "term");
  if (t == "bnode") throw ApiError(400, "blank_node", "blank nodes cannot be versioned: _:" + v);
  if (t != "literal") throw bad_request("unknown term type '" + t + "'");
  std::string datatype, language;
  if (auto it = j.find("datatype"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw bad_request("datatype must be a string");
    datatype = it->get<std::string>();
    if (!rdf::is_absolute_iri(datatype)) throw bad_request("datatype is not an absolute IRI: '" + datatype + "'");
  }
  if (auto it = j.find("language"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw bad_request("language must be a string");
    language = it->get<std::string>();
    if (datatype == kRdfLangString) datatype.clear();
  }
  try {
    return rdf::Term::literal(v, datatype, language);
  } catch (const InvalidTerm& e) {
    throw bad_request(e.what());
  }
}

json snapshot_to_json(const prov::Snapshot& s) {
  return {{"number", s.number},
          {"snapshot_iri", s.snapshot_iri.value()},
          {"entity", s.entity.value()},
          {"generated_at", prov::format_timestamp(s.generated_at)},
          {"invalidated_at", s.invalidated_at ? json(prov::format_timestamp(*s.invalidated_at)) : json(nullptr)},
          {"agent", term_to_json(s.agent)},
          {"primary_source", opt_term(s.primary_source)},
          {"derived_from", opt_term(s.derived_from)},
          {"update_query", s.update_query ? json(*s.update_query) : json(nullptr)}};
}

json violation_to_json(const shapes::Violation& v) {
  return {{"focus", v.focus.value()},
          {"path", v.path.value()},
          {"kind", std::string(shapes::to_string(v.kind))},
          {"message", v.message}};
}

json error_to_json(const ApiError& e) {
  json j = {{"code", e.code()}, {"message", e.what()}};
  if (!e.violations().empty()) j["violations"] = violations_to_json(e.violations());
  return j;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    if (i + 2 >= text.size() || !std::isxdigit(static_cast<unsigned char>(text[i + 1])) ||
        !std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
      throw bad_request("malformed percent-encoding in '" + std::string(text) + "'");
    }
    out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
    i += 2;
  }
  return out;
}

HttpResponse HttpApi::handle(const HttpRequest& req) {
  HttpResponse res;
  try {
    int status = 200;
    const json body = route(req, status);
    res.status = status;
    res.body = body.dump();
  } catch (const ApiError& e) {
    res.status = e.status();
    res.body = error_to_json(e).dump();
  } catch (const json::exception& e) {
    res.status = 400;
    res.body = json{{"code", "bad_request"}, {"message", e.what()}}.dump();
  } catch (const std::exception& e) {
    spdlog::error("{} {}: {}", req.method, req.target, e.what());
    res.status = 500;
    res.body = json{{"code", "internal"}, {"message", e.what()}}.dump();
  }
  return res;
}

json HttpApi::route(const HttpRequest& req, int& status) {
  const auto qpos = req.target.find('?');
  const std::string path = req.target.substr(0, qpos);
  const auto query = parse_query(qpos == std::string::npos ? std::string_view() : std::string_view(req.target).substr(qpos + 1));
  const std::string& m = req.method;

  if (path == "/api/schema") {
    if (m != "GET") throw method_not_allowed(m, path);
    return schema_to_json(engine_);
  }
  if (path == "/api/classes") {
    if (m != "GET") throw method_not_allowed(m, path);
    json arr = json::array();
    for (const auto& c : engine_.list_classes()) {
      arr.push_back({{"iri", c.cls.value()}, {"label", c.label}, {"count", c.count}});
    }
    return arr;
  }
  if (path == "/api/entities") {
    if (m != "GET") throw method_not_allowed(m, path);
    const auto cls = query.find("class");
    if (cls == query.end()) throw bad_request("missing query parameter 'class'");
    const std::size_t offset = query.count("offset") ? number_from(query.at("offset"), "offset") : 0;
    const std::size_t limit = query.count("limit") ? number_from(query.at("limit"), "limit") : kDefaultLimit;
    if (limit == 0 || limit > kMaxLimit) throw bad_request("limit must be between 1 and " + std::to_string(kMaxLimit));
    const EntityPage page = engine_.list_entities(iri_from(cls->second, "class"), offset, limit);
    json items = json::array();
    for (const auto& e : page.items) items.push_back(e.value());
    return {{"items", items}, {"offset", offset}, {"limit", limit}, {"has_more", page.has_more}};
  }
  const rdf::Term agent = agent_from_header(req.curator);
  if (path == "/api/entity") {
    if (m != "POST") throw method_not_allowed(m, path);
    const json body = parse_body(req.body);
    const json& cls = field(body, "class");
    if (!cls.is_string()) throw bad_request("class must be an IRI string");
    CreateRequest create{iri_from(cls.get<std::string>(), "class"), optional_iri(body, "entity"),
                         pairs_from(body.contains("state") ? body.at("state") : json::array()), agent,
                         optional_iri(body, "primary_source")};
    status = 201;
    return snapshot_to_json(engine_.create_entity(create));
  }
  static const std::string kPrefix = "/api/entity/";
  if (path.rfind(kPrefix, 0) != 0 || path.size() == kPrefix.size()) {
    throw ApiError(404, "not_found", "no route for " + path);
  }
  const std::string rest = path.substr(kPrefix.size());
  std::smatch match;
  if (std::regex_match(rest, match, kTimeline)) {
    if (m != "GET") throw method_not_allowed(m, path);
    const rdf::Term entity = iri_from(percent_decode(match.str(1)), "entity");
    json arr = json::array();
    for (const auto& e : engine_.get_timeline(entity)) {
      json j = snapshot_to_json(e.snapshot);
      j["added_count"] = e.added_count;
      j["deleted_count"] = e.deleted_count;
      arr.push_back(std::move(j));
    }
    return arr;
  }
  if (std::regex_match(rest, match, kVersion)) {
    if (m != "GET") throw method_not_allowed(m, path);
    const rdf::Term entity = iri_from(percent_decode(match.str(1)), "entity");
    const auto [snap, state] = engine_.get_version(entity, number_from(match.str(2), "version"));
    return {{"snapshot", snapshot_to_json(snap)}, {"state", state_to_json(state)}};
  }
  if (std::regex_match(rest, match, kRestore)) {
    if (m != "POST") throw method_not_allowed(m, path);
    const rdf::Term entity = iri_from(percent_decode(match.str(1)), "entity");
    const RestoreResult r = engine_.restore_version(entity, number_from(match.str(2), "version"), agent);
    return {{"snapshot", snapshot_to_json(r.snapshot)}, {"warnings", violations_to_json(r.warnings)}};
  }
  const rdf::Term entity = iri_from(percent_decode(rest), "entity");
  if (m == "GET") return entity_to_json(engine_.get_entity(entity));
  if (m == "PUT") {
    const json body = parse_body(req.body);
    const json& base = field(body, "base_version");
    if (!base.is_number_unsigned() || base.get<std::uint64_t>() < 1) {
      throw bad_request("base_version must be a positive integer");
    }
    EditRequest edit{entity, base.get<std::uint64_t>(), pairs_from(field(body, "state")), agent,
                     optional_iri(body, "primary_source")};
    return snapshot_to_json(engine_.submit_edit(edit));
  }
  if (m == "DELETE") {
    std::optional<std::uint64_t> base;
    if (query.count("base_version")) base = number_from(query.at("base_version"), "base_version");
    return snapshot_to_json(engine_.delete_entity(entity, agent, base));
  }
  throw method_not_allowed(m, path);
}

struct HttpServer::Impl {
  explicit Impl(Engine& engine) : api(engine) {}
  HttpApi api;
  httplib::Server server;
  std::atomic<bool> serving{false};
  std::atomic<bool> stop_requested{false};
};

HttpServer::HttpServer(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> curator;
    if (req.has_header("X-Curator")) curator = req.get_header_value("X-Curator");
    const HttpResponse out = impl_->api.handle({req.method, req.target, req.body, curator});
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  auto& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
  s.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::info("{} {} {} {}", req.remote_addr, req.method, req.target, res.status);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& s = impl_->server;
  if (port == 0) {
    const int bound = s.bind_to_any_port(host);
    if (bound < 0) throw TransportError("cannot bind " + host);
    return bound;
  }
  if (!s.bind_to_port(host, port)) throw TransportError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::serve() {
  impl_->serving = true;
  if (!impl_->stop_requested) impl_->server.listen_after_bind();
  impl_->serving = false;
}

void HttpServer::stop() {
  impl_->stop_requested = true;
  // A stop that races serve() waits for the listener to come up first.
  while (impl_->serving && !impl_->server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  impl_->server.stop();
}

}  // namespace tessera::service
