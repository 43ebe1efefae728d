#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "../support/service_fixture.hpp"
#include "tessera/errors.hpp"
#include "tessera/service/config.hpp"
#include "tessera/store/remote_store.hpp"

using namespace tessera;
namespace fs = std::filesystem;

namespace {

std::string error_path(const std::string& yaml) {
  try {
    service::parse_engine_config(yaml, "/etc/tessera");
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("tessera-config-" + std::to_string(::getpid()) + "-" +
                                               std::to_string(reinterpret_cast<std::uintptr_t>(this)));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

}  // namespace

TEST_CASE("engine config defaults") {
  const auto c = service::parse_engine_config("", "/etc/tessera");
  CHECK(c.store.mode == "memory");
  CHECK_FALSE(c.store.file);
  CHECK_FALSE(c.store.data_graph);
  CHECK(c.store.timeout_seconds == 30);
  CHECK_FALSE(c.shapes_path);
  CHECK(c.base_iri == "http://example.org");
  CHECK(c.bind == "127.0.0.1");
  CHECK(c.port == 8080);
}

TEST_CASE("engine config keys") {
  const auto c = service::parse_engine_config(R"(
store:
  mode: remote
  query_endpoint: http://localhost:9999/sparql
  update_endpoint: http://localhost:9999/update
  data_graph: http://ex.org/data
  timeout_seconds: 5
  username: curator
  password: secret
shapes:
  path: shapes.nt
display:
  path: /abs/display.yaml
base_iri: https://w3id.org/oc/meta
server:
  bind: 0.0.0.0
  port: 5000
)",
                                              "/etc/tessera");
  CHECK(c.store.mode == "remote");
  CHECK(c.store.query_endpoint == "http://localhost:9999/sparql");
  CHECK(c.store.update_endpoint == "http://localhost:9999/update");
  CHECK(c.store.data_graph == rdf::Term::iri("http://ex.org/data"));
  CHECK(c.store.timeout_seconds == 5);
  CHECK(c.store.username == "curator");
  CHECK(c.store.password == "secret");
  CHECK(c.shapes_path == fs::path("/etc/tessera/shapes.nt"));
  CHECK(c.display_path == fs::path("/abs/display.yaml"));
  CHECK(c.base_iri == "https://w3id.org/oc/meta");
  CHECK(c.bind == "0.0.0.0");
  CHECK(c.port == 5000);
  CHECK(dynamic_cast<store::RemoteStore*>(service::open_store(c.store).get()) != nullptr);
}

TEST_CASE("engine config errors name the key") {
  CHECK(error_path("colour: red\n") == "colour");
  CHECK(error_path("store:\n  mode: disk\n") == "store.mode");
  CHECK(error_path("store:\n  mode: remote\n") == "store.query_endpoint");
  CHECK(error_path("store:\n  mode: remote\n  query_endpoint: ftp://x\n") == "store.query_endpoint");
  CHECK(error_path("store:\n  mode: remote\n  query_endpoint: http://x/q\n") == "store.update_endpoint");
  CHECK(error_path("store:\n  data_graph: data\n") == "store.data_graph");
  CHECK(error_path("store:\n  timeout_seconds: soon\n") == "store.timeout_seconds");
  CHECK(error_path("store:\n  timeout_seconds: 0\n") == "store.timeout_seconds");
  CHECK(error_path("store:\n  username: u\n") == "store.username");
  CHECK(error_path("store:\n  graph: x\n") == "store.graph");
  CHECK(error_path("shapes:\n  file: x\n") == "shapes.file");
  CHECK(error_path("shapes: {}\n") == "shapes.path");
  CHECK(error_path("server:\n  port: 70000\n") == "server.port");
  CHECK(error_path("base_iri: example\n") == "base_iri");
  CHECK(error_path("store: [1, 2]\n") == "store");
  CHECK(error_path("store: {mode: memory\n") == "");
  CHECK(error_path("store:\n  data_graph: default\n") == "<no error>");
}

TEST_CASE("runtime from files") {
  TempDir dir;
  dir.write("shapes.nt", testing::kBookShapes);
  dir.write("display.yaml", testing::kBookDisplay);
  const auto cfg_path = dir.write("tessera.yaml", "store:\n  file: data.nq\n  data_graph: http://ex.org/data\n"
                                                  "shapes:\n  path: shapes.nt\ndisplay:\n  path: display.yaml\n"
                                                  "base_iri: http://ex.org\n");
  {
    auto rt = service::open_runtime(service::load_engine_config(cfg_path), testing::StepClock());
    CHECK(rt.engine->schema().classes.size() == 1);
    CHECK(rt.engine->display().classes.size() == 2);
    rt.engine->create_entity({testing::book::kBook, std::nullopt, testing::book_state("A"), testing::book::kAgent,
                              std::nullopt});
  }
  CHECK(fs::exists(dir.path / "data.nq"));
  auto again = service::open_runtime(service::load_engine_config(cfg_path));
  CHECK(again.engine->get_timeline(rdf::Term::iri("http://ex.org/Book/1")).size() == 1);
}

TEST_CASE("runtime failures") {
  TempDir dir;
  SUBCASE("missing config file") {
    CHECK_THROWS_AS(service::load_engine_config(dir.path / "absent.yaml"), ConfigError);
  }
  SUBCASE("missing shapes file names the path") {
    const auto cfg = dir.write("c.yaml", "shapes:\n  path: nowhere.nt\n");
    try {
      service::open_runtime(service::load_engine_config(cfg));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find((dir.path / "nowhere.nt").string()) != std::string::npos);
    }
  }
  SUBCASE("unsupported SHACL") {
    dir.write("s.nt", "<http://ex.org/s> <http://www.w3.org/ns/shacl#targetClass> <http://ex.org/C> .\n"
                      "<http://ex.org/s> <http://www.w3.org/ns/shacl#or> <http://ex.org/l> .\n");
    const auto cfg = dir.write("c.yaml", "shapes:\n  path: s.nt\n");
    CHECK_THROWS_AS(service::open_runtime(service::load_engine_config(cfg)), UnsupportedShape);
  }
  SUBCASE("malformed shapes file") {
    dir.write("s.nt", "<http://ex.org/s> <http://ex.org/p> .\n");
    const auto cfg = dir.write("c.yaml", "shapes:\n  path: s.nt\n");
    CHECK_THROWS_AS(service::open_runtime(service::load_engine_config(cfg)), ConfigError);
  }
  SUBCASE("missing display file") {
    const auto cfg = dir.write("c.yaml", "display:\n  path: d.yaml\n");
    CHECK_THROWS_AS(service::open_runtime(service::load_engine_config(cfg)), ConfigError);
  }
}
