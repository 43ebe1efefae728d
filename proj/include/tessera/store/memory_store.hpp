#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <utility>

#include "tessera/store/store.hpp"

namespace tessera::store {

/// In-process quad store partitioned by graph.
///
/// Understands the restricted update grammar (applied atomically under the
/// write lock) and a basic-graph-pattern subset of SELECT/ASK: triple patterns
/// with optional GRAPH blocks, DISTINCT, ORDER BY, LIMIT and OFFSET. Anything
/// beyond that raises QueryError. Readers share a lock; writers are exclusive.
class MemoryStore final : public StoreBackend {
 public:
  MemoryStore() = default;
  explicit MemoryStore(const rdf::QuadSet& quads);

  /// Loads `path` when it exists and rewrites it after every update.
  static std::unique_ptr<MemoryStore> persistent(const std::filesystem::path& path);

  MemoryStore(const MemoryStore&) = delete;
  MemoryStore& operator=(const MemoryStore&) = delete;

  SolutionTable select(std::string_view query) override;
  bool ask(std::string_view query) override;
  void update(std::string_view update) override;
  rdf::EntityState fetch_entity_state(const rdf::Term& entity, const rdf::GraphName& graph) override;
  bool contains(const rdf::Quad& quad) override;

  void insert(const rdf::QuadSet& quads);
  rdf::QuadSet dump() const;
  std::string dump_nquads() const;
  std::size_t size() const;

  using PredicateObjects = std::set<std::pair<rdf::Term, rdf::Term>>;
  using Graph = std::map<rdf::Term, PredicateObjects>;  // subject index

 private:
  void persist_locked() const;

  mutable std::shared_mutex mutex_;
  std::map<rdf::GraphName, Graph> graphs_;
  std::optional<std::filesystem::path> persist_path_;
};

}  // namespace tessera::store
