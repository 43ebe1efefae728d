#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tessera/display/config.hpp"
#include "tessera/errors.hpp"
#include "tessera/prov/snapshot.hpp"
#include "tessera/shapes/schema.hpp"
#include "tessera/store/store.hpp"

namespace tessera::service {

/// Failure with an HTTP status and a stable machine code.
class ApiError : public Error {
 public:
  ApiError(int status, std::string code, const std::string& message,
           std::vector<shapes::Violation> violations = {})
      : Error(message), status_(status), code_(std::move(code)), violations_(std::move(violations)) {}

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const std::vector<shapes::Violation>& violations() const noexcept { return violations_; }

 private:
  int status_;
  std::string code_;
  std::vector<shapes::Violation> violations_;
};

struct EngineOptions {
  rdf::GraphName data_graph;
  // Prefix for minted entity IRIs: base_iri + "/" + class local name + "/" + n.
  std::string base_iri = "http://example.org";
  prov::Clock clock = prov::system_now;
  // Downgrade missing-triple corruption during materialization to warnings.
  bool lenient = false;
};

using PredicateObjectList = std::vector<std::pair<rdf::Term, rdf::Term>>;

struct CreateRequest {
  rdf::Term cls;
  std::optional<rdf::Term> entity;  // minted when absent
  PredicateObjectList state;
  rdf::Term agent;
  std::optional<rdf::Term> primary_source;
};

struct EditRequest {
  rdf::Term entity;
  std::uint64_t base_version = 0;
  PredicateObjectList new_state;
  rdf::Term agent;
  std::optional<rdf::Term> primary_source;
};

struct RestoreResult {
  prov::Snapshot snapshot;
  // Violations of the restored state against the current schema; not enforced.
  std::vector<shapes::Violation> warnings;
};

struct TimelineEntry {
  prov::Snapshot snapshot;
  std::size_t added_count = 0;
  std::size_t deleted_count = 0;
};

struct PropertyView {
  rdf::Term path;
  std::string label;
  std::vector<std::string> values;
  std::optional<std::vector<rdf::Term>> ordered;
  std::optional<std::string> order_error;
};

struct EntityView {
  rdf::Term entity;
  std::optional<std::uint64_t> version;  // head number; nullopt when unversioned
  bool deleted = false;
  std::set<rdf::Term> types;
  rdf::EntityState state;
  std::vector<PropertyView> properties;  // displayed properties only
};

struct ClassCount {
  rdf::Term cls;
  std::string label;
  std::size_t count = 0;
};

struct EntityPage {
  std::vector<rdf::Term> items;
  bool has_more = false;
};

struct ImportSummary {
  std::size_t entities = 0;
  std::size_t quads = 0;
};

/// The edit pipeline and read model. Writes to one entity run inside that
/// entity's critical section and reach the store as a single update request
/// carrying both the data change and the provenance change.
///
/// Every operation throws ApiError; store failures surface as 502 and
/// corrupt histories as 500.
class Engine {
 public:
  Engine(store::StoreBackend& store, shapes::FormSchema schema, display::DisplayConfig display,
         EngineOptions options);

  prov::Snapshot create_entity(const CreateRequest& req);
  prov::Snapshot submit_edit(const EditRequest& req);
  /// `base_version`, when given, must equal the head.
  prov::Snapshot delete_entity(const rdf::Term& entity, const rdf::Term& agent,
                               std::optional<std::uint64_t> base_version = std::nullopt);
  RestoreResult restore_version(const rdf::Term& entity, std::uint64_t target, const rdf::Term& agent);

  std::vector<TimelineEntry> get_timeline(const rdf::Term& entity);
  EntityView get_entity(const rdf::Term& entity);
  std::pair<prov::Snapshot, rdf::EntityState> get_version(const rdf::Term& entity, std::uint64_t n);
  /// Canonical update query turning version m into version n (m < n).
  std::string diff_versions(const rdf::Term& entity, std::uint64_t m, std::uint64_t n);

  std::vector<ClassCount> list_classes();
  EntityPage list_entities(const rdf::Term& cls, std::size_t offset, std::size_t limit);

  /// Versions every subject of `quads` from snapshot 1 in the data graph
  /// (source graphs are ignored). Refuses the whole batch when any subject is
  /// already versioned or any quad has a blank node.
  ImportSummary import_quads(const rdf::QuadSet& quads, const rdf::Term& agent,
                             const std::optional<rdf::Term>& source);

  const shapes::FormSchema& schema() const noexcept { return schema_; }
  const display::DisplayConfig& display() const noexcept { return display_; }
  const EngineOptions& options() const noexcept { return options_; }
  store::StoreBackend& store() noexcept { return store_; }

 private:
  class EntityLock;

  std::shared_ptr<std::mutex> lock_for(const rdf::Term& entity);
  prov::Timeline timeline_or_404(const rdf::Term& entity);
  rdf::EntityState current_state(const rdf::Term& entity);
  rdf::EntityState build_state(const rdf::Term& entity, const PredicateObjectList& pairs) const;
  std::vector<shapes::Violation> validate(const rdf::EntityState& state);
  std::set<rdf::Term> types_of(const rdf::Term& node);
  rdf::Term mint(const rdf::Term& cls);
  delta::MaterializeOptions materialize_options() const;
  void write(const std::string& update);

  store::StoreBackend& store_;
  shapes::FormSchema schema_;
  display::DisplayConfig display_;
  EngineOptions options_;

  std::mutex locks_mutex_;
  std::map<rdf::Term, std::weak_ptr<std::mutex>> locks_;
  std::mutex mint_mutex_;
  std::uint64_t next_id_ = 1;
};

/// "X-Curator" value to agent term: absolute IRIs become IRIs, other text a
/// literal, and an absent header the literal "anonymous".
rdf::Term agent_from_header(const std::optional<std::string>& header);

}  // namespace tessera::service
