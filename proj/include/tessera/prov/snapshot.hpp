#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tessera/delta/changeset.hpp"
#include "tessera/rdf/quad.hpp"
#include "tessera/store/store.hpp"

namespace tessera::prov {

using Timestamp = std::chrono::sys_seconds;
using Clock = std::function<Timestamp()>;

/// Wall-clock UTC time truncated to seconds.
Timestamp system_now();

/// "YYYY-MM-DDThh:mm:ssZ".
std::string format_timestamp(Timestamp t);
/// Accepts the xsd:dateTime lexical space with a mandatory zone ("Z" or
/// ±hh:mm); fractional seconds are truncated. Throws SyntaxError otherwise.
Timestamp parse_timestamp(std::string_view text);

/// entity + "/prov/se/" + n
rdf::Term snapshot_iri(const rdf::Term& entity, std::uint64_t n);
/// entity + "/prov/": the named graph holding the entity's snapshots.
rdf::Term prov_graph(const rdf::Term& entity);

struct Snapshot {
  rdf::Term snapshot_iri;
  rdf::Term entity;
  std::uint64_t number = 1;
  Timestamp generated_at;
  std::optional<Timestamp> invalidated_at;
  rdf::Term agent;  // IRI or literal
  std::optional<rdf::Term> primary_source;
  std::optional<rdf::Term> derived_from;
  std::optional<std::string> update_query;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Timeline {
  rdf::Term entity;
  std::vector<Snapshot> snapshots;  // by number, ascending

  bool empty() const noexcept { return snapshots.empty(); }
  const Snapshot& head() const;
  /// The head carries an invalidation time only when it records a deletion.
  bool deleted() const noexcept { return !snapshots.empty() && snapshots.back().invalidated_at.has_value(); }
  /// Throws UnknownVersion outside 1..head.
  const Snapshot& at(std::uint64_t n) const;
};

/// A new snapshot plus the rewrite of its predecessor, ready to be persisted.
struct Revision {
  Snapshot snapshot;
  std::optional<Snapshot> predecessor_before;
  std::optional<Snapshot> predecessor_after;
  // Data-graph change the revision stands for; empty for creations.
  delta::ChangeSet data_change;

  /// Quad changes to the provenance graph.
  delta::ChangeSet provenance_change() const;
  /// Data change and provenance change as one update request.
  std::string update_request() const;
};

/// Throws AlreadyVersioned if `existing` has snapshots and EmptyDiff when the
/// state holds no triples.
Revision record_creation(const Timeline& existing, const rdf::EntityState& state,
                         const rdf::Term& agent, const std::optional<rdf::Term>& source,
                         Timestamp t);

/// Throws NoHistory without a predecessor and EmptyDiff when old == new.
Revision record_modification(const Timeline& existing, const rdf::EntityState& old_state,
                             const rdf::EntityState& new_state, const rdf::GraphName& data_graph,
                             const rdf::Term& agent, const std::optional<rdf::Term>& source,
                             Timestamp t);

/// New head citing `target` as primary source. Throws NoHistory, EntityMismatch
/// when `target` belongs to another entity, EmptyDiff when current already
/// equals the restored state.
Revision record_restore(const Timeline& existing, const rdf::EntityState& current,
                        const Snapshot& target, const rdf::EntityState& restored_state,
                        const rdf::GraphName& data_graph, const rdf::Term& agent, Timestamp t);

/// Deletion marker: deletes every triple and is invalidated at its own
/// generation time. Throws NoHistory, and EmptyDiff on an empty state.
Revision record_deletion(const Timeline& existing, const rdf::EntityState& current,
                         const rdf::GraphName& data_graph, const rdf::Term& agent, Timestamp t);

rdf::QuadSet snapshot_to_quads(const Snapshot& s, const rdf::Term& graph);

/// Rebuilds a timeline from provenance quads (any graph); quads about other
/// entities are ignored. Throws HistoryCorrupt on missing or duplicate
/// numbers, broken derivation chains, missing or repeated required fields,
/// and timestamps that contradict the chain.
Timeline timeline_from_quads(const rdf::Term& entity, const rdf::QuadSet& quads);

Timeline load_timeline(store::StoreBackend& store, const rdf::Term& entity);

/// materialize(current, update queries of snapshots n+1..head, newest first).
/// Throws UnknownVersion outside 1..head.
rdf::EntityState state_at(const Timeline& timeline, const rdf::EntityState& current,
                          std::uint64_t n, const delta::MaterializeOptions& options = {});

rdf::EntityState state_at(store::StoreBackend& store, const rdf::Term& entity,
                          const rdf::GraphName& data_graph, std::uint64_t n,
                          const delta::MaterializeOptions& options = {});

}  // namespace tessera::prov
