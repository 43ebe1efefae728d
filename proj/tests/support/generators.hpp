#pragma once

// Random RDF value generators shared by the property tests. Every generator
// takes the engine explicitly so each test controls its own seed.

#include <random>
#include <string>
#include <vector>

#include "tessera/rdf/quad.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline rdf::Term random_iri(Rng& rng, std::size_t pool = 40) {
  static const std::vector<std::string> bases = {
      "http://ex.org/", "https://w3id.org/oc/meta/br/", "urn:isbn:", "http://ex.org/a#"};
  return rdf::Term::iri(bases[pick(rng, bases.size())] + std::to_string(pick(rng, pool)));
}

// Lexical forms that exercise the escaping rules: quotes, backslashes,
// control characters, and multi-byte UTF-8.
inline std::string random_lexical(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "A", "title", " ", "\"", "\\", "\n", "\r", "\t", "\x01", "\x7f", "caf\xc3\xa9",
      "\xe2\x82\xac", "\xf0\x9f\x93\x9a", "'", "<b>", "#", "{ }", ".", "01", "DELETE DATA"};
  std::string out;
  const std::size_t n = pick(rng, 5);
  for (std::size_t i = 0; i < n; ++i) out += pieces[pick(rng, pieces.size())];
  return out;
}

inline rdf::Term random_literal(Rng& rng) {
  switch (pick(rng, 4)) {
    case 0: return rdf::Term::literal(random_lexical(rng));
    case 1: return rdf::Term::literal(random_lexical(rng), {}, coin(rng) ? "en" : "it-IT");
    case 2: return rdf::Term::literal(std::to_string(pick(rng, 100)), std::string(vocab::kXsdInteger));
    default: return rdf::Term::literal(random_lexical(rng), "http://ex.org/dt/" + std::to_string(pick(rng, 3)));
  }
}

inline rdf::Term random_object(Rng& rng, bool allow_blank = false) {
  if (allow_blank && coin(rng, 0.1)) return rdf::Term::blank("b" + std::to_string(pick(rng, 5)));
  return coin(rng) ? random_iri(rng) : random_literal(rng);
}

inline rdf::GraphName random_graph(Rng& rng) {
  if (coin(rng, 0.3)) return std::nullopt;
  return rdf::Term::iri("http://ex.org/graph/" + std::to_string(pick(rng, 3)));
}

inline rdf::Quad random_quad(Rng& rng, bool allow_blank = false) {
  rdf::Term subject = allow_blank && coin(rng, 0.1)
                          ? rdf::Term::blank("s" + std::to_string(pick(rng, 5)))
                          : random_iri(rng, 10);
  return rdf::Quad(std::move(subject), random_iri(rng, 6), random_object(rng, allow_blank),
                   random_graph(rng));
}

inline rdf::QuadSet random_quads(Rng& rng, std::size_t max_size, bool allow_blank = false) {
  rdf::QuadSet out;
  const std::size_t n = pick(rng, max_size + 1);
  while (out.size() < n) out.insert(random_quad(rng, allow_blank));
  return out;
}

inline rdf::Triple random_triple_of(Rng& rng, const rdf::Term& subject) {
  return rdf::Triple(subject, random_iri(rng, 6), random_object(rng));
}

inline rdf::EntityState random_state(Rng& rng, const rdf::Term& entity, std::size_t max_size) {
  rdf::EntityState state(entity);
  const std::size_t n = pick(rng, max_size + 1);
  for (std::size_t i = 0; i < n; ++i) state.insert(random_triple_of(rng, entity));
  return state;
}

}  // namespace tessera::testing

#include "tessera/delta/changeset.hpp"

namespace tessera::testing {

// A valid changeset of at most `max_size` quads in a single random graph.
inline delta::ChangeSet random_changeset(Rng& rng, std::size_t max_size) {
  const rdf::GraphName graph = random_graph(rng);
  rdf::QuadSet deletions, additions;
  const std::size_t n = pick(rng, max_size + 1);
  for (std::size_t i = 0; i < n; ++i) {
    rdf::Quad q(random_iri(rng, 10), random_iri(rng, 6), random_object(rng), graph);
    if (coin(rng)) {
      if (!additions.count(q)) deletions.insert(q);
    } else if (!deletions.count(q)) {
      additions.insert(q);
    }
  }
  return delta::ChangeSet(std::move(deletions), std::move(additions));
}

}  // namespace tessera::testing
