#include "tessera/rdf/nquads.hpp"

#include <iterator>
#include <sstream>

#include "internal/scanner.hpp"
#include "internal/utf8.hpp"
#include "tessera/errors.hpp"

namespace tessera::rdf {

namespace {

void check_utf8(std::string_view text) {
  const std::size_t bad = detail::find_invalid_utf8(text);
  if (bad == detail::kNoError) return;
  std::size_t line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < bad; ++i) {
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  throw SyntaxError("invalid UTF-8 byte sequence", line, bad - line_start + 1);
}

Term read_subject_or_graph(detail::Scanner& in, const char* what) {
  if (in.peek() == '<') return in.read_iri();
  if (in.peek() == '_' && in.peek(1) == ':') return in.read_blank();
  in.fail(std::string("expected IRI or blank node as ") + what);
}

Term read_object(detail::Scanner& in) {
  switch (in.peek()) {
    case '<': return in.read_iri();
    case '"': return in.read_literal();
    case '_':
      if (in.peek(1) == ':') return in.read_blank();
      break;
    default: break;
  }
  in.fail("expected IRI, blank node or literal as object");
}

}  // namespace

void read_nquads(std::string_view text,
                 const std::function<void(const Quad&, std::size_t line)>& sink) {
  check_utf8(text);
  detail::Scanner in(text);
  for (;;) {
    in.skip_space(true, true);
    if (in.at_end()) break;
    const std::size_t line = in.line();

    Term subject = read_subject_or_graph(in, "subject");
    in.skip_space(false, false);
    if (in.peek() != '<') in.fail("expected IRI as predicate");
    Term predicate = in.read_iri();
    in.skip_space(false, false);
    Term object = read_object(in);
    in.skip_space(false, false);

    GraphName graph;
    if (in.peek() == '"') in.fail("literal is not allowed as graph name");
    if (in.peek() != '.') {
      graph = read_subject_or_graph(in, "graph name");
      in.skip_space(false, false);
    }
    if (!in.consume('.')) in.fail("expected '.' at end of statement");
    in.skip_space(false, true);
    if (!in.at_end() && in.peek() != '\n' && in.peek() != '\r') {
      in.fail("unexpected content after statement");
    }
    sink(Quad(std::move(subject), std::move(predicate), std::move(object), std::move(graph)),
         line);
  }
}

QuadSet parse_nquads(std::string_view text) {
  QuadSet out;
  read_nquads(text, [&](const Quad& q, std::size_t) { out.insert(q); });
  return out;
}

QuadSet parse_nquads(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_nquads(text);
}

std::string quad_text(const Quad& quad) {
  std::string out = quad.subject().text();
  out += ' ';
  out += quad.predicate().text();
  out += ' ';
  out += quad.object().text();
  if (quad.graph()) {
    out += ' ';
    out += quad.graph()->text();
  }
  out += " .";
  return out;
}

std::string serialize_nquads(const QuadSet& quads) {
  std::string out;
  for (const auto& q : quads) {
    out += quad_text(q);
    out += '\n';
  }
  return out;
}

}  // namespace tessera::rdf
