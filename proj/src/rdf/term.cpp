#include "tessera/rdf/term.hpp"

#include <cstdio>

#include "internal/utf8.hpp"
#include "tessera/errors.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::rdf {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string render(Term::Kind kind, const std::string& value, const std::string& datatype,
                   const std::string& language) {
  switch (kind) {
    case Term::Kind::Iri:
      return "<" + value + ">";
    case Term::Kind::Blank:
      return "_:" + value;
    case Term::Kind::Literal:
      break;
  }
  std::string out = "\"" + escape_string(value) + "\"";
  if (!language.empty()) {
    out += "@" + language;
  } else if (datatype != vocab::kXsdString) {
    out += "^^<" + datatype + ">";
  }
  return out;
}

}  // namespace

bool is_absolute_iri(std::string_view iri) noexcept {
  if (iri.empty() || !is_alpha(iri[0])) return false;
  std::size_t i = 1;
  while (i < iri.size() && (is_alpha(iri[i]) || is_digit(iri[i]) || iri[i] == '+' ||
                            iri[i] == '-' || iri[i] == '.')) {
    ++i;
  }
  if (i >= iri.size() || iri[i] != ':') return false;
  for (char c : iri) {
    if (detail::is_forbidden_iri_byte(static_cast<unsigned char>(c))) return false;
  }
  return detail::find_invalid_utf8(iri) == detail::kNoError;
}

bool is_valid_language_tag(std::string_view tag) noexcept {
  std::size_t i = 0;
  while (i < tag.size() && is_alpha(tag[i])) ++i;
  if (i == 0) return false;
  while (i < tag.size()) {
    if (tag[i] != '-') return false;
    const std::size_t start = ++i;
    while (i < tag.size() && (is_alpha(tag[i]) || is_digit(tag[i]))) ++i;
    if (i == start) return false;
  }
  return true;
}

bool is_valid_blank_label(std::string_view label) noexcept {
  if (label.empty()) return false;
  std::size_t pos = 0;
  bool first = true;
  char32_t last = 0;
  while (pos < label.size()) {
    char32_t cp;
    const std::size_t len = detail::decode_utf8(label, pos, cp);
    if (len == 0) return false;
    if (first) {
      if (!detail::is_pn_chars_u(cp) && !(cp >= '0' && cp <= '9')) return false;
      first = false;
    } else if (!detail::is_pn_chars(cp) && cp != '.') {
      return false;
    }
    last = cp;
    pos += len;
  }
  return last != '.';
}

std::string escape_string(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x20 || u == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", u);
          out += buf;
        } else {
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

Term::Term(Kind kind, std::string value, std::string datatype, std::string language)
    : kind_(kind),
      value_(std::move(value)),
      datatype_(std::move(datatype)),
      language_(std::move(language)),
      text_(render(kind_, value_, datatype_, language_)) {}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) throw InvalidTerm("not an absolute IRI: <" + value + ">");
  return Term(Kind::Iri, std::move(value), {}, {});
}

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
  if (detail::find_invalid_utf8(lexical) != detail::kNoError) {
    throw InvalidTerm("literal is not valid UTF-8");
  }
  if (!language.empty()) {
    if (!is_valid_language_tag(language)) throw InvalidTerm("invalid language tag: " + language);
    if (!datatype.empty() && datatype != vocab::kRdfLangString) {
      throw InvalidTerm("language-tagged literal with datatype <" + datatype + ">");
    }
    datatype = std::string(vocab::kRdfLangString);
  } else if (datatype.empty()) {
    datatype = std::string(vocab::kXsdString);
  } else if (datatype == vocab::kRdfLangString) {
    throw InvalidTerm("rdf:langString literal without a language tag");
  } else if (!is_absolute_iri(datatype)) {
    throw InvalidTerm("datatype is not an absolute IRI: <" + datatype + ">");
  }
  return Term(Kind::Literal, std::move(lexical), std::move(datatype), std::move(language));
}

Term Term::blank(std::string label) {
  if (!is_valid_blank_label(label)) throw InvalidTerm("invalid blank node label: " + label);
  return Term(Kind::Blank, std::move(label), {}, {});
}

}  // namespace tessera::rdf
