#include "tessera/service/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tessera/errors.hpp"
#include "tessera/rdf/nquads.hpp"
#include "tessera/store/memory_store.hpp"
#include "tessera/store/remote_store.hpp"

namespace tessera::service {

namespace fs = std::filesystem;

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return {};
  return " (line " + std::to_string(m.line + 1) + ")";
}

void check_keys(const YAML::Node& map, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) throw ConfigError(path, "expected a mapping" + where(map));
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key '" + key + "'" + where(kv.first));
    }
  }
}

std::optional<std::string> scalar(const YAML::Node& parent, const std::string& key, const std::string& path) {
  const YAML::Node node = parent[key];
  if (!node || node.IsNull()) return std::nullopt;
  if (!node.IsScalar()) throw ConfigError(path, "expected a scalar" + where(node));
  return node.Scalar();
}

int integer(const YAML::Node& parent, const std::string& key, const std::string& path, int lo, int hi, int dflt) {
  const YAML::Node node = parent[key];
  if (!node || node.IsNull()) return dflt;
  int v = 0;
  try {
    v = node.as<int>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected an integer" + where(node));
  }
  if (v < lo || v > hi) {
    throw ConfigError(path, "must be between " + std::to_string(lo) + " and " + std::to_string(hi) + where(node));
  }
  return v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string http_url(const YAML::Node& parent, const std::string& key, const std::string& path) {
  const auto v = scalar(parent, key, path);
  if (!v || v->empty()) throw ConfigError(path, "required when store.mode is remote" + where(parent));
  if (v->rfind("http://", 0) != 0 && v->rfind("https://", 0) != 0) {
    throw ConfigError(path, "expected an http(s) URL" + where(parent[key]));
  }
  return *v;
}

StoreConfig parse_store(const YAML::Node& node, const fs::path& base) {
  StoreConfig s;
  if (!node || node.IsNull()) return s;
  check_keys(node, "store",
             {"mode", "file", "query_endpoint", "update_endpoint", "data_graph", "timeout_seconds", "username",
              "password"});
  s.mode = scalar(node, "mode", "store.mode").value_or("memory");
  if (s.mode != "memory" && s.mode != "remote") {
    throw ConfigError("store.mode", "expected memory or remote, got '" + s.mode + "'" + where(node["mode"]));
  }
  if (const auto f = scalar(node, "file", "store.file")) s.file = resolve(base, *f);
  if (s.mode == "remote") {
    if (s.file) throw ConfigError("store.file", "only valid when store.mode is memory" + where(node["file"]));
    s.query_endpoint = http_url(node, "query_endpoint", "store.query_endpoint");
    s.update_endpoint = http_url(node, "update_endpoint", "store.update_endpoint");
  }
  if (const auto g = scalar(node, "data_graph", "store.data_graph"); g && *g != "default") {
    if (!rdf::is_absolute_iri(*g)) {
      throw ConfigError("store.data_graph", "expected an IRI or 'default'" + where(node["data_graph"]));
    }
    s.data_graph = rdf::Term::iri(*g);
  }
  s.timeout_seconds = integer(node, "timeout_seconds", "store.timeout_seconds", 1, 3600, 30);
  s.username = scalar(node, "username", "store.username");
  s.password = scalar(node, "password", "store.password");
  if (s.username.has_value() != s.password.has_value()) {
    throw ConfigError("store.username", "username and password go together" + where(node));
  }
  return s;
}

std::optional<fs::path> file_path(const YAML::Node& root, const std::string& section, const fs::path& base) {
  const YAML::Node node = root[section];
  if (!node || node.IsNull()) return std::nullopt;
  check_keys(node, section, {"path"});
  const auto p = scalar(node, "path", section + ".path");
  if (!p) throw ConfigError(section + ".path", "missing required key" + where(node));
  return resolve(base, *p);
}

std::string read_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(what, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

EngineConfig parse_engine_config(std::string_view yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", "invalid YAML: " + e.msg + " (line " + std::to_string(e.mark.line + 1) + ")");
  }
  EngineConfig c;
  if (!root || root.IsNull()) return c;
  check_keys(root, "", {"store", "shapes", "display", "base_iri", "server"});
  c.store = parse_store(root["store"], base_dir);
  c.shapes_path = file_path(root, "shapes", base_dir);
  c.display_path = file_path(root, "display", base_dir);
  if (const auto b = scalar(root, "base_iri", "base_iri")) {
    if (!rdf::is_absolute_iri(*b)) throw ConfigError("base_iri", "not an absolute IRI" + where(root["base_iri"]));
    c.base_iri = *b;
  }
  if (const YAML::Node server = root["server"]; server && !server.IsNull()) {
    check_keys(server, "server", {"bind", "port"});
    c.bind = scalar(server, "bind", "server.bind").value_or(c.bind);
    c.port = integer(server, "port", "server.port", 0, 65535, c.port);
  }
  return c;
}

EngineConfig load_engine_config(const fs::path& path) {
  return parse_engine_config(read_file(path, path.string()), path.parent_path());
}

std::unique_ptr<store::StoreBackend> open_store(const StoreConfig& config) {
  if (config.mode == "remote") {
    return std::make_unique<store::RemoteStore>(store::RemoteStoreOptions{
        config.query_endpoint, config.update_endpoint, config.username, config.password, config.timeout_seconds});
  }
  if (config.file) {
    try {
      return store::MemoryStore::persistent(*config.file);
    } catch (const SyntaxError& e) {
      throw ConfigError("store.file", config.file->string() + ": " + e.what());
    }
  }
  return std::make_unique<store::MemoryStore>();
}

shapes::FormSchema load_shapes_file(const fs::path& path) {
  const std::string text = read_file(path, "shapes.path");
  try {
    return shapes::extract_schema(rdf::parse_nquads(text));
  } catch (const SyntaxError& e) {
    throw ConfigError("shapes.path", path.string() + ": " + e.what());
  }
}

Runtime open_runtime(const EngineConfig& config, prov::Clock clock, bool lenient) {
  shapes::FormSchema schema = config.shapes_path ? load_shapes_file(*config.shapes_path) : shapes::FormSchema{};
  display::DisplayConfig display;
  if (config.display_path) {
    if (!fs::exists(*config.display_path)) {
      throw ConfigError("display.path", "cannot read " + config.display_path->string());
    }
    display = display::load_display_config_file(*config.display_path);
  }
  Runtime rt{config, open_store(config.store), nullptr};
  EngineOptions options;
  options.data_graph = config.store.data_graph;
  options.base_iri = config.base_iri;
  options.clock = std::move(clock);
  options.lenient = lenient;
  rt.engine = std::make_unique<Engine>(*rt.store, std::move(schema), std::move(display), std::move(options));
  return rt;
}

}  // namespace tessera::service
