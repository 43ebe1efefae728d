#include "tessera/store/store.hpp"

#include <algorithm>

#include "tessera/errors.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::store {

namespace {

std::string in_graph(const rdf::GraphName& graph, const std::string& patterns) {
  if (!graph) return "{ " + patterns + " }";
  return "{ GRAPH " + graph->text() + " { " + patterns + " } }";
}

const std::string& rdf_type() {
  static const std::string text = rdf::Term::iri(std::string(vocab::kRdfType)).text();
  return text;
}

}  // namespace

std::size_t SolutionTable::column(std::string_view variable) const {
  const auto it = std::find(variables.begin(), variables.end(), variable);
  if (it == variables.end()) throw QueryError("variable ?" + std::string(variable) + " not in result");
  return static_cast<std::size_t>(it - variables.begin());
}

std::vector<rdf::Term> SolutionTable::values(std::string_view variable) const {
  const std::size_t i = column(variable);
  std::vector<rdf::Term> out;
  for (const auto& row : rows) {
    if (row[i]) out.push_back(*row[i]);
  }
  return out;
}

rdf::EntityState StoreBackend::fetch_entity_state(const rdf::Term& entity,
                                                  const rdf::GraphName& graph) {
  const SolutionTable table = select(queries::entity_state(entity, graph));
  const std::size_t p = table.column("p");
  const std::size_t o = table.column("o");
  rdf::EntityState state(entity);
  for (const auto& row : table.rows) {
    if (!row[p] || !row[o]) continue;
    state.insert(rdf::Triple(entity, *row[p], *row[o]));
  }
  return state;
}

bool StoreBackend::contains(const rdf::Quad& quad) { return ask(queries::contains(quad)); }

rdf::EntityState fetch_entity_state(StoreBackend& store, const rdf::Term& entity,
                                    const rdf::GraphName& graph) {
  if (!entity.is_iri()) throw InvalidTerm("entity must be an IRI: " + entity.text());
  rdf::EntityState state = store.fetch_entity_state(entity, graph);
  if (state.has_blank()) {
    throw BlankNodePresent("entity " + entity.text() +
                           " has blank nodes; skolemize the data before versioning it");
  }
  return state;
}

void apply_changeset(StoreBackend& store, const delta::ChangeSet& cs) {
  if (cs.empty()) return;
  store.update(delta::to_update_query(cs));
}

namespace queries {

std::string entity_state(const rdf::Term& entity, const rdf::GraphName& graph) {
  return "SELECT ?p ?o WHERE " + in_graph(graph, entity.text() + " ?p ?o");
}

std::string contains(const rdf::Quad& quad) {
  return "ASK " + in_graph(quad.graph(), quad.subject().text() + " " + quad.predicate().text() +
                                             " " + quad.object().text());
}

std::string graph_triples(const rdf::GraphName& graph) {
  return "SELECT ?s ?p ?o WHERE " + in_graph(graph, "?s ?p ?o");
}

std::string types_of(const rdf::Term& subject, const rdf::GraphName& graph) {
  return "SELECT ?c WHERE " + in_graph(graph, subject.text() + " " + rdf_type() + " ?c");
}

std::string instances(const rdf::Term& cls, const rdf::GraphName& graph, std::size_t offset,
                      std::size_t limit) {
  return "SELECT DISTINCT ?s WHERE " + in_graph(graph, "?s " + rdf_type() + " " + cls.text()) +
         " ORDER BY ?s LIMIT " + std::to_string(limit) + " OFFSET " + std::to_string(offset);
}

std::string typed_subjects(const rdf::GraphName& graph) {
  return "SELECT DISTINCT ?s ?c WHERE " + in_graph(graph, "?s " + rdf_type() + " ?c");
}

std::string order_links(const rdf::Term& entity, const rdf::Term& path,
                        const rdf::Term& order_predicate, const rdf::GraphName& graph) {
  return "SELECT ?a ?b WHERE " +
         in_graph(graph, entity.text() + " " + path.text() + " ?a . ?a " +
                             order_predicate.text() + " ?b");
}

}  // namespace queries

}  // namespace tessera::store
