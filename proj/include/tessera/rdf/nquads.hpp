#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "tessera/rdf/quad.hpp"

namespace tessera::rdf {

/// Parses N-Quads (and therefore N-Triples) text. Comments and blank lines are
/// skipped. Throws SyntaxError with the 1-based line and column of the first
/// malformed statement; relative IRIs and invalid UTF-8 are syntax errors.
QuadSet parse_nquads(std::string_view text);
QuadSet parse_nquads(std::istream& in);

/// Streaming variant: `sink` receives each quad with the line it came from.
void read_nquads(std::string_view text,
                 const std::function<void(const Quad&, std::size_t line)>& sink);

/// One line per quad in canonical order, each terminated by "\n".
std::string serialize_nquads(const QuadSet& quads);

/// A single statement without the trailing newline: `s p o [g] .`
std::string quad_text(const Quad& quad);

}  // namespace tessera::rdf
