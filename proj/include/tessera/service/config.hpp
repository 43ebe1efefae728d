#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tessera/service/engine.hpp"

namespace tessera::service {

struct StoreConfig {
  std::string mode = "memory";                // "memory" | "remote"
  std::optional<std::filesystem::path> file;  // memory mode: N-Quads file kept in sync
  std::string query_endpoint;
  std::string update_endpoint;
  rdf::GraphName data_graph;  // "default" in YAML
  int timeout_seconds = 30;
  std::optional<std::string> username;
  std::optional<std::string> password;
};

struct EngineConfig {
  StoreConfig store;
  std::optional<std::filesystem::path> shapes_path;
  std::optional<std::filesystem::path> display_path;
  std::string base_iri = "http://example.org";
  std::string bind = "127.0.0.1";
  int port = 8080;
};

/// Relative paths resolve against `base_dir`. Unknown keys and bad values
/// raise ConfigError naming the key path.
EngineConfig parse_engine_config(std::string_view yaml_text, const std::filesystem::path& base_dir);
EngineConfig load_engine_config(const std::filesystem::path& path);

std::unique_ptr<store::StoreBackend> open_store(const StoreConfig& config);

/// Reads an N-Triples shapes file. A missing or unreadable file and syntax
/// errors raise ConfigError naming the file; UnsupportedShape and
/// InvalidShape pass through.
shapes::FormSchema load_shapes_file(const std::filesystem::path& path);

/// Store plus engine built from one configuration.
struct Runtime {
  EngineConfig config;
  std::unique_ptr<store::StoreBackend> store;
  std::unique_ptr<Engine> engine;
};

Runtime open_runtime(const EngineConfig& config, prov::Clock clock = prov::system_now, bool lenient = false);

}  // namespace tessera::service
