#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tessera/delta/changeset.hpp"
#include "tessera/rdf/quad.hpp"

namespace tessera::store {

/// Result of a SELECT: variable names and one row per solution; unbound
/// cells are std::nullopt.
struct SolutionTable {
  std::vector<std::string> variables;
  std::vector<std::vector<std::optional<rdf::Term>>> rows;

  /// Index of `variable`; throws QueryError if it was not projected.
  std::size_t column(std::string_view variable) const;
  /// All bound values of one column, in row order.
  std::vector<rdf::Term> values(std::string_view variable) const;
};

/// Storage contract shared by the embedded store and remote SPARQL endpoints.
/// Implementations tolerate concurrent readers; after update(u) returns, a
/// select from the same client observes u.
class StoreBackend {
 public:
  virtual ~StoreBackend() = default;

  virtual SolutionTable select(std::string_view query) = 0;
  virtual bool ask(std::string_view query) = 0;
  virtual void update(std::string_view update) = 0;

  /// Triples of `graph` whose subject is `entity`. The default implementation
  /// issues queries::entity_state through select().
  virtual rdf::EntityState fetch_entity_state(const rdf::Term& entity, const rdf::GraphName& graph);
  virtual bool contains(const rdf::Quad& quad);
};

/// Throws InvalidTerm unless `entity` is an IRI, BlankNodePresent when a
/// fetched triple holds a blank node, and whatever the backend raises.
rdf::EntityState fetch_entity_state(StoreBackend& store, const rdf::Term& entity,
                                    const rdf::GraphName& graph);

/// Removes every deletion and adds every addition with one update request.
void apply_changeset(StoreBackend& store, const delta::ChangeSet& cs);

/// Text of the queries the engine issues. Both backends receive exactly these
/// strings, so the embedded store only has to understand their shapes.
namespace queries {

std::string entity_state(const rdf::Term& entity, const rdf::GraphName& graph);
std::string contains(const rdf::Quad& quad);
// ?s ?p ?o over one whole graph.
std::string graph_triples(const rdf::GraphName& graph);
// ?c: rdf:type values of `subject`.
std::string types_of(const rdf::Term& subject, const rdf::GraphName& graph);
// ?s: distinct instances of `cls`, ordered, paged.
std::string instances(const rdf::Term& cls, const rdf::GraphName& graph, std::size_t offset,
                      std::size_t limit);
// ?s ?c: every typed subject with each of its classes.
std::string typed_subjects(const rdf::GraphName& graph);
// ?a ?b: value ?a of (entity, path) linked to ?b by `order_predicate`.
std::string order_links(const rdf::Term& entity, const rdf::Term& path,
                        const rdf::Term& order_predicate, const rdf::GraphName& graph);

}  // namespace queries

}  // namespace tessera::store
