#pragma once

#include <string>
#include <variant>

#include "internal/scanner.hpp"
#include "tessera/rdf/term.hpp"

namespace tessera::detail {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using TermOrVariable = std::variant<rdf::Term, Variable>;

/// Reads one SPARQL term in the absolute-IRI subset: IRIREF, double-quoted
/// literal, or (when `allow_variables`) a ?var / $var. Prefixed names, the
/// `a` shorthand, blank nodes, numeric/boolean shorthands and single-quoted
/// strings raise UnsupportedConstruct.
TermOrVariable read_sparql_term(Scanner& in, bool allow_variables);

/// SPARQL whitespace: spaces, tabs, line breaks, and '#' comments.
inline void skip_sparql_space(Scanner& in) { in.skip_space(true, true); }

}  // namespace tessera::detail
