#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <thread>

#include "../support/endpoint_process.hpp"
#include "../support/generators.hpp"
#include "tessera/errors.hpp"
#include "tessera/store/memory_store.hpp"
#include "tessera/store/remote_store.hpp"

using namespace tessera;
using rdf::Quad;
using rdf::Term;

namespace {

const Term kE = Term::iri("http://ex.org/e");
const Term kOther = Term::iri("http://ex.org/other");
const Term kTitle = Term::iri("http://purl.org/dc/terms/title");
const Term kType = Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
const Term kG = Term::iri("http://ex.org/g");

// Brute-force filter over a plain quad list.
rdf::TripleSet filter_by(const rdf::QuadSet& quads, const Term& subject, const rdf::GraphName& g) {
  rdf::TripleSet out;
  for (const auto& q : quads) {
    if (q.subject() == subject && q.graph() == g) out.insert(q.triple());
  }
  return out;
}

}  // namespace

TEST_CASE("empty store yields an empty state") {
  store::MemoryStore s;
  CHECK(store::fetch_entity_state(s, kE, kG).empty());
  CHECK(store::fetch_entity_state(s, kE, std::nullopt).empty());
}

TEST_CASE("fetch_entity_state keeps only the entity's own triples") {
  store::MemoryStore s({Quad(kE, kTitle, Term::literal("A"), kG),
                        Quad(kOther, kTitle, Term::literal("B"), kG),
                        Quad(kOther, kTitle, kE, kG)});
  const auto state = store::fetch_entity_state(s, kE, kG);
  CHECK(state.size() == 1);
  CHECK(state.contains(rdf::Triple(kE, kTitle, Term::literal("A"))));
}

TEST_CASE("fetch_entity_state rejects blank nodes and non-IRI entities") {
  store::MemoryStore s({Quad(kE, kTitle, Term::blank("b0"), kG)});
  CHECK_THROWS_AS(store::fetch_entity_state(s, kE, kG), BlankNodePresent);
  CHECK_THROWS_AS(store::fetch_entity_state(s, Term::literal("x"), kG), InvalidTerm);
}

TEST_CASE("random 500-quad stores match a brute-force subject and graph filter") {
  testing::Rng rng(101);
  for (int run = 0; run < 20; ++run) {
    rdf::QuadSet quads;
    while (quads.size() < 500) quads.insert(testing::random_quad(rng));
    store::MemoryStore s(quads);
    REQUIRE(s.size() == 500);
    for (int k = 0; k < 25; ++k) {
      const Term subject = testing::random_iri(rng, 10);
      const rdf::GraphName g = testing::random_graph(rng);
      CHECK(store::fetch_entity_state(s, subject, g).triples() == filter_by(quads, subject, g));
      // The generic query path must agree with the indexed override.
      CHECK(s.StoreBackend::fetch_entity_state(subject, g).triples() == filter_by(quads, subject, g));
    }
  }
}

TEST_CASE("apply_changeset adds, and the inverse restores the initial content") {
  store::MemoryStore s;
  const delta::ChangeSet cs({}, {Quad(kE, kTitle, Term::literal("v"), kG)});
  store::apply_changeset(s, cs);
  CHECK(s.contains(Quad(kE, kTitle, Term::literal("v"), kG)));
  store::apply_changeset(s, delta::invert(cs));
  CHECK(s.size() == 0);
}

TEST_CASE("200 random store/changeset pairs follow set algebra") {
  testing::Rng rng(202);
  for (int run = 0; run < 200; ++run) {
    const rdf::QuadSet initial = testing::random_quads(rng, 60);
    const delta::ChangeSet cs = testing::random_changeset(rng, 20);
    store::MemoryStore s(initial);
    store::apply_changeset(s, cs);

    rdf::QuadSet expected;
    for (const auto& q : initial) {
      if (!cs.deletions().count(q)) expected.insert(q);
    }
    expected.insert(cs.additions().begin(), cs.additions().end());
    REQUIRE(s.dump() == expected);

    store::apply_changeset(s, delta::invert(cs));
    rdf::QuadSet restored = expected;
    for (const auto& q : cs.additions()) restored.erase(q);
    restored.insert(cs.deletions().begin(), cs.deletions().end());
    CHECK(s.dump() == restored);
    // When cs only deletes present quads and adds absent ones, the inverse
    // brings back exactly the initial content.
    const bool applicable =
        std::all_of(cs.deletions().begin(), cs.deletions().end(), [&](const Quad& q) { return initial.count(q) != 0; }) &&
        std::none_of(cs.additions().begin(), cs.additions().end(), [&](const Quad& q) { return initial.count(q) != 0; });
    if (applicable) CHECK(s.dump() == initial);
  }
}

TEST_CASE("store and state stay coherent under apply_changeset") {
  testing::Rng rng(303);
  for (int run = 0; run < 100; ++run) {
    const rdf::GraphName g = testing::random_graph(rng);
    const Term e = testing::random_iri(rng, 10);
    rdf::QuadSet initial;
    const auto seed_state = testing::random_state(rng, e, 8);
    for (const auto& t : seed_state.triples()) initial.emplace(t, g);
    for (const auto& q : testing::random_quads(rng, 30)) initial.insert(q);
    store::MemoryStore s(initial);
    const auto before = store::fetch_entity_state(s, e, g);
    const auto after_state = testing::random_state(rng, e, 8);
    const auto cs = delta::diff(before, after_state, g);
    store::apply_changeset(s, cs);
    CHECK(store::fetch_entity_state(s, e, g) == delta::apply_to_state(before, cs));
    CHECK(store::fetch_entity_state(s, e, g) == after_state);
  }
}

TEST_CASE("memory store query subset") {
  store::MemoryStore s({Quad(kE, kType, Term::iri("http://ex.org/Book"), kG),
                        Quad(kOther, kType, Term::iri("http://ex.org/Book"), kG),
                        Quad(Term::iri("http://ex.org/z"), kType, Term::iri("http://ex.org/Book"), kG),
                        Quad(kE, kTitle, Term::literal("A"), kG),
                        Quad(kE, kTitle, Term::literal("B")),
                        Quad(kOther, kType, Term::iri("http://ex.org/Thing"), kG)});

  SUBCASE("instances are ordered and paged") {
    const auto t = s.select(store::queries::instances(Term::iri("http://ex.org/Book"), kG, 1, 1));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.values("s").front() == kOther);
  }
  SUBCASE("default graph patterns do not see named graphs") {
    const auto t = s.select("SELECT ?o WHERE { <http://ex.org/e> <http://purl.org/dc/terms/title> ?o }");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.values("o").front() == Term::literal("B"));
  }
  SUBCASE("GRAPH ?g ranges over named graphs only") {
    const auto t = s.select(
        "SELECT ?g WHERE { GRAPH ?g { <http://ex.org/e> <http://purl.org/dc/terms/title> ?o } }");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.values("g").front() == kG);
  }
  SUBCASE("joins, shared variables, DISTINCT and DESC ordering") {
    const auto t = s.select(
        "SELECT DISTINCT ?s WHERE { GRAPH <http://ex.org/g> { ?s "
        "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> ?c ; "
        "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Book> } } ORDER BY DESC(?s)");
    const auto v = t.values("s");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == Term::iri("http://ex.org/z"));
    CHECK(v[2] == kE);
  }
  SUBCASE("ASK") {
    CHECK(s.ask(store::queries::contains(Quad(kE, kTitle, Term::literal("A"), kG))));
    CHECK_FALSE(s.ask(store::queries::contains(Quad(kE, kTitle, Term::literal("A")))));
  }
  SUBCASE("unsupported forms raise QueryError") {
    CHECK_THROWS_AS(s.select("PREFIX ex: <http://ex.org/> SELECT ?s WHERE { ?s ?p ?o }"), QueryError);
    CHECK_THROWS_AS(s.select("SELECT ?s WHERE { ?s ?p ?o FILTER(?s = ?o) }"), QueryError);
    CHECK_THROWS_AS(s.select("SELECT (COUNT(?s) AS ?n) WHERE { ?s ?p ?o }"), QueryError);
    CHECK_THROWS_AS(s.select("CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"), QueryError);
    CHECK_THROWS_AS(s.update("DELETE { ?s ?p ?o } WHERE { ?s ?p ?o }"), QueryError);
  }
}

TEST_CASE("multi-graph updates apply atomically") {
  store::MemoryStore s;
  const std::string bad =
      "INSERT DATA { GRAPH <http://ex.org/g> { <http://ex.org/e> <http://ex.org/p> \"1\" } }; "
      "INSERT DATA { <http://ex.org/e> <http://ex.org/p> ?x }";
  CHECK_THROWS_AS(s.update(bad), QueryError);
  CHECK(s.size() == 0);
  s.update(
      "INSERT DATA { GRAPH <http://ex.org/g> { <http://ex.org/e> <http://ex.org/p> \"1\" } }; "
      "INSERT DATA { GRAPH <http://ex.org/h> { <http://ex.org/e> <http://ex.org/p> \"2\" } }");
  CHECK(s.size() == 2);
}

TEST_CASE("concurrent readers and writers leave a consistent store") {
  store::MemoryStore s;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&s, t] {
      for (int i = 0; i < 50; ++i) {
        const Term e = Term::iri("http://ex.org/t" + std::to_string(t));
        store::apply_changeset(
            s, delta::ChangeSet({}, {Quad(e, kTitle, Term::literal(std::to_string(i)), kG)}));
        (void)store::fetch_entity_state(s, e, kG);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(s.size() == 400);
}

TEST_CASE("persistent memory store reloads its file") {
  const auto path = std::filesystem::temp_directory_path() / "tessera_store_test.nq";
  std::filesystem::remove(path);
  {
    auto s = store::MemoryStore::persistent(path);
    store::apply_changeset(*s, delta::ChangeSet({}, {Quad(kE, kTitle, Term::literal("é\n"), kG)}));
  }
  auto again = store::MemoryStore::persistent(path);
  CHECK(again->contains(Quad(kE, kTitle, Term::literal("é\n"), kG)));
  std::filesystem::remove(path);
}

TEST_CASE("SPARQL JSON results decoding") {
  const auto t = store::parse_sparql_results(R"({"head":{"vars":["a","b"]},"results":{"bindings":[
    {"a":{"type":"uri","value":"http://ex.org/x"},"b":{"type":"literal","value":"hi","xml:lang":"en"}},
    {"a":{"type":"literal","value":"1","datatype":"http://www.w3.org/2001/XMLSchema#integer"}},
    {"b":{"type":"literal","value":"plain"}}]}})");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][1] == Term::literal("hi", {}, "en"));
  CHECK_FALSE(t.rows[1][1].has_value());
  CHECK(t.rows[2][1] == Term::literal("plain"));
  CHECK(store::parse_sparql_boolean(R"({"head":{},"boolean":true})"));
  CHECK_THROWS_AS(store::parse_sparql_results("{"), QueryError);
}

TEST_CASE("remote store against the reference endpoint matches the memory store") {
  testing::EndpointProcess endpoint;
  store::RemoteStore remote({endpoint.query_url(), endpoint.update_url(), {}, {}, 10});
  store::MemoryStore memory;
  testing::Rng rng(404);
  for (int run = 0; run < 30; ++run) {
    const auto cs = testing::random_changeset(rng, 15);
    store::apply_changeset(remote, cs);
    store::apply_changeset(memory, cs);
  }
  const auto all = memory.dump();
  std::set<std::pair<Term, rdf::GraphName>> keys;
  for (const auto& q : all) keys.emplace(q.subject(), q.graph());
  REQUIRE_FALSE(keys.empty());
  for (const auto& [subject, g] : keys) {
    CHECK(store::fetch_entity_state(remote, subject, g) == store::fetch_entity_state(memory, subject, g));
  }
  for (const auto& q : all) CHECK(remote.contains(q));
  CHECK_THROWS_AS(remote.select("SELEC nonsense"), QueryError);
}

TEST_CASE("unreachable remote endpoint raises TransportError") {
  store::RemoteStore remote({"http://127.0.0.1:1/query", "http://127.0.0.1:1/update", {}, {}, 2});
  CHECK_THROWS_AS(remote.select("SELECT ?s WHERE { ?s ?p ?o }"), TransportError);
  CHECK_THROWS_AS(store::RemoteStore({"ftp://x", "http://x", {}, {}, 1}), TransportError);
}
