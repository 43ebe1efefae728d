#include "tessera/rdf/quad.hpp"

#include "tessera/errors.hpp"

namespace tessera::rdf {

std::string graph_text(const GraphName& graph) { return graph ? graph->text() : std::string(); }

Triple::Triple(Term subject, Term predicate, Term object)
    : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
  if (subject_.is_literal()) throw InvalidTerm("literal in subject position: " + subject_.text());
  if (!predicate_.is_iri()) throw InvalidTerm("predicate must be an IRI: " + predicate_.text());
}

bool Triple::has_blank() const noexcept { return subject_.is_blank() || object_.is_blank(); }

Quad::Quad(Term subject, Term predicate, Term object, GraphName graph)
    : triple_(std::move(subject), std::move(predicate), std::move(object)),
      graph_(std::move(graph)) {
  if (graph_ && graph_->is_literal()) throw InvalidTerm("literal graph name: " + graph_->text());
}

Quad::Quad(const Triple& triple, GraphName graph) : triple_(triple), graph_(std::move(graph)) {
  if (graph_ && graph_->is_literal()) throw InvalidTerm("literal graph name: " + graph_->text());
}

bool Quad::has_blank() const noexcept {
  return triple_.has_blank() || (graph_ && graph_->is_blank());
}

EntityState::EntityState(Term entity) : entity_(std::move(entity)) {}

EntityState::EntityState(Term entity, TripleSet triples)
    : entity_(std::move(entity)), triples_(std::move(triples)) {
  for (const auto& t : triples_) {
    if (t.subject() != entity_) {
      throw EntityMismatch("triple subject " + t.subject().text() + " is not " + entity_.text());
    }
  }
}

void EntityState::insert(const Triple& triple) {
  if (triple.subject() != entity_) {
    throw EntityMismatch("triple subject " + triple.subject().text() + " is not " +
                         entity_.text());
  }
  triples_.insert(triple);
}

bool EntityState::has_blank() const noexcept {
  if (entity_.is_blank()) return true;
  for (const auto& t : triples_) {
    if (t.has_blank()) return true;
  }
  return false;
}

std::set<Term> EntityState::objects(const Term& predicate) const {
  std::set<Term> out;
  for (const auto& t : triples_) {
    if (t.predicate() == predicate) out.insert(t.object());
  }
  return out;
}

}  // namespace tessera::rdf
