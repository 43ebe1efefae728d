#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>

#include "tessera/rdf/term.hpp"

namespace tessera::rdf {

/// Graph component of a quad; std::nullopt is the default graph, which orders
/// before every named graph.
using GraphName = std::optional<Term>;

std::string graph_text(const GraphName& graph);

class Triple {
 public:
  /// Throws InvalidTerm if the subject is a literal or the predicate is not an IRI.
  Triple(Term subject, Term predicate, Term object);

  const Term& subject() const noexcept { return subject_; }
  const Term& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  bool has_blank() const noexcept;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Term predicate_;
  Term object_;
};

class Quad {
 public:
  /// Throws InvalidTerm on a literal subject, non-IRI predicate, or literal graph.
  Quad(Term subject, Term predicate, Term object, GraphName graph = std::nullopt);
  Quad(const Triple& triple, GraphName graph);

  const Term& subject() const noexcept { return triple_.subject(); }
  const Term& predicate() const noexcept { return triple_.predicate(); }
  const Term& object() const noexcept { return triple_.object(); }
  const GraphName& graph() const noexcept { return graph_; }
  const Triple& triple() const noexcept { return triple_; }

  bool has_blank() const noexcept;

  friend bool operator==(const Quad&, const Quad&) = default;
  // Canonical order: graph (default first), subject, predicate, object.
  friend std::strong_ordering operator<=>(const Quad& a, const Quad& b) {
    if (auto c = a.graph_ <=> b.graph_; c != 0) return c;
    return a.triple_ <=> b.triple_;
  }

 private:
  Triple triple_;
  GraphName graph_;
};

using QuadSet = std::set<Quad>;
using TripleSet = std::set<Triple>;

/// The outgoing triples of one entity: the unit of versioning.
class EntityState {
 public:
  explicit EntityState(Term entity);
  /// Throws EntityMismatch if any triple has a different subject.
  EntityState(Term entity, TripleSet triples);

  const Term& entity() const noexcept { return entity_; }
  const TripleSet& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  /// Throws EntityMismatch if the subject differs from the entity.
  void insert(const Triple& triple);
  void erase(const Triple& triple) { triples_.erase(triple); }
  bool contains(const Triple& triple) const { return triples_.count(triple) != 0; }

  bool has_blank() const noexcept;
  /// Objects of (entity, predicate, ·) in canonical order.
  std::set<Term> objects(const Term& predicate) const;

  friend bool operator==(const EntityState&, const EntityState&) = default;

 private:
  Term entity_;
  TripleSet triples_;
};

}  // namespace tessera::rdf
