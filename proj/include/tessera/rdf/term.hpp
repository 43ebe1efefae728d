#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace tessera::rdf {

/// An RDF term: IRI, literal, or blank node.
///
/// Terms are immutable. Each one caches its N-Triples surface form, and both
/// equality and ordering are defined on that form. Because escaping is
/// canonical, text equality coincides with structural equality (lexical form,
/// datatype, and language tag all match), and text ordering is the canonical
/// order used by every serializer in the project.
class Term {
 public:
  enum class Kind : std::uint8_t { Iri, Literal, Blank };

  /// Throws InvalidTerm unless `value` is an absolute IRI without whitespace,
  /// angle brackets or other characters N-Triples forbids inside IRIREF.
  static Term iri(std::string value);

  /// A literal. An empty datatype means xsd:string, or rdf:langString when a
  /// language tag is given. Throws InvalidTerm on a malformed language tag, a
  /// language tag with a datatype other than rdf:langString, or rdf:langString
  /// without a tag.
  static Term literal(std::string lexical, std::string datatype = {}, std::string language = {});

  static Term blank(std::string label);

  Kind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == Kind::Iri; }
  bool is_literal() const noexcept { return kind_ == Kind::Literal; }
  bool is_blank() const noexcept { return kind_ == Kind::Blank; }

  // IRI text, lexical form, or blank label depending on kind.
  const std::string& value() const noexcept { return value_; }
  // Empty for non-literals.
  const std::string& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }

  /// N-Triples form: `<iri>`, `"lex"`, `"lex"@tag`, `"lex"^^<dt>`, `_:label`.
  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Term& a, const Term& b) noexcept { return a.text_ == b.text_; }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    return a.text_.compare(b.text_) <=> 0;
  }

 private:
  Term(Kind kind, std::string value, std::string datatype, std::string language);

  Kind kind_;
  std::string value_;
  std::string datatype_;
  std::string language_;
  std::string text_;
};

inline const std::string& term_text(const Term& term) { return term.text(); }

bool is_absolute_iri(std::string_view iri) noexcept;
bool is_valid_language_tag(std::string_view tag) noexcept;
bool is_valid_blank_label(std::string_view label) noexcept;

/// Escapes a lexical form for use between double quotes: \" \\ \n \r \t, and
/// \uXXXX for any other control character.
std::string escape_string(std::string_view lexical);

}  // namespace tessera::rdf

template <>
struct std::hash<tessera::rdf::Term> {
  std::size_t operator()(const tessera::rdf::Term& t) const noexcept {
    return std::hash<std::string>{}(t.text());
  }
};
