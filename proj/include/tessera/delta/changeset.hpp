#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tessera/rdf/quad.hpp"

namespace tessera::delta {

/// Disjoint deletion and addition quad sets sharing one graph.
class ChangeSet {
 public:
  ChangeSet() = default;
  /// Throws InvalidChangeSet when the halves overlap, a blank node occurs, or
  /// the quads span more than one graph.
  ChangeSet(rdf::QuadSet deletions, rdf::QuadSet additions);

  const rdf::QuadSet& deletions() const noexcept { return deletions_; }
  const rdf::QuadSet& additions() const noexcept { return additions_; }
  bool empty() const noexcept { return deletions_.empty() && additions_.empty(); }
  std::size_t size() const noexcept { return deletions_.size() + additions_.size(); }

  /// The graph shared by every quad; std::nullopt for an empty changeset.
  std::optional<rdf::GraphName> graph() const;

  friend bool operator==(const ChangeSet&, const ChangeSet&) = default;

 private:
  rdf::QuadSet deletions_;
  rdf::QuadSet additions_;
};

/// deletions = old \ new, additions = new \ old, lifted into `graph`.
/// Throws EntityMismatch when the states describe different entities and
/// BlankNodePresent when either state holds a blank node.
ChangeSet diff(const rdf::EntityState& old_state, const rdf::EntityState& new_state,
               const rdf::GraphName& graph);

ChangeSet invert(const ChangeSet& cs);

/// Canonical restricted SPARQL Update text:
///   DELETE DATA { GRAPH <g> { s p o . ... } }; INSERT DATA { GRAPH <g> { ... } }
/// The GRAPH wrapper is dropped for the default graph, an empty half is
/// omitted, and an empty changeset yields "".
std::string to_update_query(const ChangeSet& cs);

/// Inverse of to_update_query, accepting any text in the restricted grammar
///   Update := Unit (";" Unit)* ; Unit := ("DELETE DATA"|"INSERT DATA") "{" Block "}"
///   Block  := Triples | "GRAPH" IRIREF "{" Triples "}"
/// Throws UnsupportedConstruct for WHERE forms, PREFIX, variables, and blank
/// nodes; SyntaxError for anything else malformed; InvalidChangeSet when the
/// units do not form a valid changeset.
ChangeSet parse_update_query(std::string_view text);

/// One DELETE DATA or INSERT DATA unit; units may target different graphs.
struct UpdateOperation {
  enum class Kind { DeleteData, InsertData };
  Kind kind;
  rdf::QuadSet quads;
};

/// Parses the restricted grammar into its units without the single-graph and
/// disjointness checks, for stores applying multi-graph requests.
std::vector<UpdateOperation> parse_update_operations(std::string_view text);

/// Joins update texts with "; ", skipping empty ones.
std::string join_updates(const std::vector<std::string>& updates);

/// (state \ deletions) ∪ additions, keeping only triples about state.entity().
rdf::EntityState apply_to_state(const rdf::EntityState& state, const ChangeSet& cs);

struct MaterializeOptions {
  // Downgrade HistoryCorrupt on an absent inverse deletion to a warning.
  bool lenient = false;
  std::function<void(const std::string&)> on_warning;
};

/// Folds the inverse of each update query over `current`, newest first,
/// yielding the state as of the snapshot preceding the oldest query.
rdf::EntityState materialize(const rdf::EntityState& current,
                             const std::vector<std::string>& later_update_queries,
                             const MaterializeOptions& options = {});

}  // namespace tessera::delta
