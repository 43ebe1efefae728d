#include "internal/sparql_terms.hpp"

#include <cctype>

#include "tessera/errors.hpp"

namespace tessera::detail {

TermOrVariable read_sparql_term(Scanner& in, bool allow_variables) {
  const char c = in.peek();
  if (c == '<') return in.read_iri();
  if (c == '"') {
    if (in.peek(1) == '"' && in.peek(2) == '"') {
      throw UnsupportedConstruct("long string literals are not supported");
    }
    return in.read_literal();
  }
  if (c == '?' || c == '$') {
    if (!allow_variables) throw UnsupportedConstruct("variables are not allowed in DATA blocks");
    in.advance();
    std::string name = in.read_word();
    if (name.empty()) in.fail("empty variable name");
    return Variable{std::move(name)};
  }
  if (c == '_' && in.peek(1) == ':') throw UnsupportedConstruct("blank nodes are not supported");
  if (c == '[') throw UnsupportedConstruct("anonymous blank nodes are not supported");
  if (c == '\'') throw UnsupportedConstruct("single-quoted literals are not supported");
  if (c == '(') throw UnsupportedConstruct("collections are not supported");
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
    throw UnsupportedConstruct("numeric literal shorthand is not supported");
  }
  if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') {
    const auto rest = in.rest();
    std::size_t n = 0;
    while (n < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[n])) ||
                               rest[n] == '_' || rest[n] == '-' || rest[n] == '.')) {
      ++n;
    }
    if (n < rest.size() && rest[n] == ':') {
      throw UnsupportedConstruct("prefixed names are not supported; use absolute IRIs");
    }
    const auto word = rest.substr(0, n);
    if (word == "a") throw UnsupportedConstruct("the 'a' shorthand is not supported");
    if (word == "true" || word == "false") {
      throw UnsupportedConstruct("boolean literal shorthand is not supported");
    }
  }
  in.fail("expected an RDF term");
}

}  // namespace tessera::detail
