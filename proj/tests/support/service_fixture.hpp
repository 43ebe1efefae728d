#pragma once

// Book catalogue used by the service, CLI and acceptance tests.

#include <atomic>
#include <chrono>
#include <string>

#include "tessera/display/config.hpp"
#include "tessera/rdf/nquads.hpp"
#include "tessera/service/engine.hpp"
#include "tessera/shapes/schema.hpp"
#include "tessera/store/memory_store.hpp"

namespace tessera::testing {

inline const std::string kBookShapes = R"(
<http://ex.org/shapes/Book> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/ns/shacl#NodeShape> .
<http://ex.org/shapes/Book> <http://www.w3.org/ns/shacl#targetClass> <http://purl.org/spar/fabio/Book> .
<http://ex.org/shapes/Book> <http://www.w3.org/ns/shacl#property> _:title .
<http://ex.org/shapes/Book> <http://www.w3.org/ns/shacl#property> _:status .
<http://ex.org/shapes/Book> <http://www.w3.org/ns/shacl#property> _:creator .
_:title <http://www.w3.org/ns/shacl#path> <http://purl.org/dc/terms/title> .
_:title <http://www.w3.org/ns/shacl#minCount> "1"^^<http://www.w3.org/2001/XMLSchema#integer> .
_:title <http://www.w3.org/ns/shacl#maxCount> "1"^^<http://www.w3.org/2001/XMLSchema#integer> .
_:title <http://www.w3.org/ns/shacl#datatype> <http://www.w3.org/2001/XMLSchema#string> .
_:status <http://www.w3.org/ns/shacl#path> <http://ex.org/status> .
_:status <http://www.w3.org/ns/shacl#maxCount> "1"^^<http://www.w3.org/2001/XMLSchema#integer> .
_:status <http://www.w3.org/ns/shacl#in> _:l1 .
_:l1 <http://www.w3.org/1999/02/22-rdf-syntax-ns#first> "draft" .
_:l1 <http://www.w3.org/1999/02/22-rdf-syntax-ns#rest> _:l2 .
_:l2 <http://www.w3.org/1999/02/22-rdf-syntax-ns#first> "published" .
_:l2 <http://www.w3.org/1999/02/22-rdf-syntax-ns#rest> <http://www.w3.org/1999/02/22-rdf-syntax-ns#nil> .
_:creator <http://www.w3.org/ns/shacl#path> <http://purl.org/dc/terms/creator> .
_:creator <http://www.w3.org/ns/shacl#class> <http://xmlns.com/foaf/0.1/Person> .
)";

inline const std::string kBookDisplay = R"(
classes:
  - iri: http://purl.org/spar/fabio/Book
    label: Book
    properties:
      - path: http://purl.org/dc/terms/title
        label: Title
      - path: http://purl.org/dc/terms/creator
        label: Authors
        order_predicate: https://w3id.org/oc/ontology/hasNext
      - path: http://ex.org/creatorName
        label: Author names
        value_query: >-
          SELECT ?name WHERE { GRAPH <http://ex.org/data> {
          [[subject]] <http://purl.org/dc/terms/creator> ?a . ?a <http://xmlns.com/foaf/0.1/name> ?name } }
          ORDER BY ?name
      - path: http://ex.org/internalNote
        label: Note
        displayed: false
  - iri: http://xmlns.com/foaf/0.1/Person
    label: Person
)";

namespace book {
inline const rdf::Term kBook = rdf::Term::iri("http://purl.org/spar/fabio/Book");
inline const rdf::Term kPerson = rdf::Term::iri("http://xmlns.com/foaf/0.1/Person");
inline const rdf::Term kType = rdf::Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
inline const rdf::Term kTitle = rdf::Term::iri("http://purl.org/dc/terms/title");
inline const rdf::Term kStatus = rdf::Term::iri("http://ex.org/status");
inline const rdf::Term kCreator = rdf::Term::iri("http://purl.org/dc/terms/creator");
inline const rdf::Term kName = rdf::Term::iri("http://xmlns.com/foaf/0.1/name");
inline const rdf::Term kNote = rdf::Term::iri("http://ex.org/internalNote");
inline const rdf::Term kNext = rdf::Term::iri("https://w3id.org/oc/ontology/hasNext");
inline const rdf::Term kData = rdf::Term::iri("http://ex.org/data");
inline const rdf::Term kAgent = rdf::Term::iri("https://orcid.org/0000-0002-8420-0696");
}  // namespace book

// Deterministic clock: one second per reading from 2024-01-01T00:00:00Z.
class StepClock {
 public:
  prov::Timestamp operator()() {
    using namespace std::chrono;
    return sys_days{year{2024} / 1 / 1} + seconds{ticks_->fetch_add(1)};
  }

 private:
  std::shared_ptr<std::atomic<std::int64_t>> ticks_ = std::make_shared<std::atomic<std::int64_t>>(0);
};

inline service::EngineOptions book_options() {
  service::EngineOptions o;
  o.data_graph = book::kData;
  o.base_iri = "http://ex.org";
  o.clock = StepClock();
  return o;
}

inline service::Engine book_engine(store::StoreBackend& store) {
  return service::Engine(store, shapes::extract_schema(rdf::parse_nquads(kBookShapes)),
                         display::load_display_config(kBookDisplay), book_options());
}

inline service::PredicateObjectList book_state(const std::string& title,
                                               std::optional<std::string> status = std::nullopt) {
  service::PredicateObjectList s{{book::kType, book::kBook}, {book::kTitle, rdf::Term::literal(title)}};
  if (status) s.emplace_back(book::kStatus, rdf::Term::literal(*status));
  return s;
}

}  // namespace tessera::testing
