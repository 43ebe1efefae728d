#include "internal/scanner.hpp"

#include <cctype>

#include "internal/utf8.hpp"
#include "tessera/errors.hpp"

namespace tessera::detail {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void Scanner::advance(std::size_t n) noexcept {
  for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
    const char c = text_[pos_++];
    if (c == '\n' || (c == '\r' && peek() != '\n')) {
      ++line_;
      line_start_ = pos_;
    }
  }
}

void Scanner::skip_space(bool newlines, bool comments) noexcept {
  while (!at_end()) {
    const char c = peek();
    if (c == ' ' || c == '\t' || (newlines && (c == '\n' || c == '\r'))) {
      advance();
    } else if (comments && c == '#') {
      while (!at_end() && peek() != '\n' && peek() != '\r') advance();
    } else {
      break;
    }
  }
}

bool Scanner::consume(char c) noexcept {
  if (peek() != c || at_end()) return false;
  advance();
  return true;
}

bool Scanner::looking_at_keyword(std::string_view keyword) const noexcept {
  if (text_.size() - pos_ < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) !=
        std::toupper(static_cast<unsigned char>(keyword[i]))) {
      return false;
    }
  }
  return !is_word_char(peek(keyword.size()));
}

bool Scanner::consume_keyword(std::string_view keyword) noexcept {
  if (!looking_at_keyword(keyword)) return false;
  advance(keyword.size());
  return true;
}

std::string Scanner::read_word() {
  const std::size_t start = pos_;
  while (!at_end() && is_word_char(peek())) advance();
  return std::string(text_.substr(start, pos_ - start));
}

void Scanner::fail(const std::string& message) const { throw SyntaxError(message, line_, column()); }

char32_t Scanner::read_escape_hex(std::size_t digits) {
  char32_t cp = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    const int v = hex_value(peek());
    if (v < 0) fail("bad hex digit in \\" + std::string(digits == 4 ? "u" : "U") + " escape");
    cp = cp * 16 + static_cast<char32_t>(v);
    advance();
  }
  if (!is_valid_code_point(cp)) fail("escape denotes an invalid code point");
  return cp;
}

rdf::Term Scanner::read_iri() {
  const std::size_t start_line = line_;
  const std::size_t start_column = column();
  if (!consume('<')) fail("expected '<'");
  std::string value;
  for (;;) {
    if (at_end()) fail("unterminated IRI");
    const char c = peek();
    if (c == '>') {
      advance();
      break;
    }
    if (c == '\\') {
      advance();
      const char kind = peek();
      if (kind != 'u' && kind != 'U') fail("only \\u and \\U escapes are allowed in IRIs");
      advance();
      append_utf8(value, read_escape_hex(kind == 'u' ? 4 : 8));
      continue;
    }
    if (is_forbidden_iri_byte(static_cast<unsigned char>(c))) {
      fail("character not allowed in IRI");
    }
    value.push_back(c);
    advance();
  }
  if (!rdf::is_absolute_iri(value)) {
    throw SyntaxError("relative or malformed IRI <" + value + ">", start_line, start_column);
  }
  return rdf::Term::iri(std::move(value));
}

rdf::Term Scanner::read_literal() {
  if (!consume('"')) fail("expected '\"'");
  std::string lexical;
  for (;;) {
    if (at_end()) fail("unterminated string literal");
    const char c = peek();
    if (c == '"') {
      advance();
      break;
    }
    if (c == '\n' || c == '\r') fail("line break inside string literal");
    if (c != '\\') {
      lexical.push_back(c);
      advance();
      continue;
    }
    advance();
    const char e = peek();
    advance();
    switch (e) {
      case 't': lexical.push_back('\t'); break;
      case 'b': lexical.push_back('\b'); break;
      case 'n': lexical.push_back('\n'); break;
      case 'r': lexical.push_back('\r'); break;
      case 'f': lexical.push_back('\f'); break;
      case '"': lexical.push_back('"'); break;
      case '\'': lexical.push_back('\''); break;
      case '\\': lexical.push_back('\\'); break;
      case 'u': append_utf8(lexical, read_escape_hex(4)); break;
      case 'U': append_utf8(lexical, read_escape_hex(8)); break;
      default: fail("invalid string escape");
    }
  }
  if (consume('@')) {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
      advance();
    }
    std::string tag(text_.substr(start, pos_ - start));
    if (!rdf::is_valid_language_tag(tag)) fail("invalid language tag '" + tag + "'");
    return rdf::Term::literal(std::move(lexical), {}, std::move(tag));
  }
  if (peek() == '^' && peek(1) == '^') {
    advance(2);
    const rdf::Term datatype = read_iri();
    try {
      return rdf::Term::literal(std::move(lexical), datatype.value());
    } catch (const InvalidTerm& e) {
      fail(e.what());
    }
  }
  return rdf::Term::literal(std::move(lexical));
}

rdf::Term Scanner::read_blank() {
  if (peek() != '_' || peek(1) != ':') fail("expected blank node label");
  advance(2);
  const std::size_t start = pos_;
  std::size_t end = pos_;  // one past the last non-'.' character
  bool first = true;
  while (!at_end()) {
    char32_t cp;
    const std::size_t len = decode_utf8(text_, pos_, cp);
    if (len == 0) fail("invalid UTF-8");
    const bool ok = first ? (is_pn_chars_u(cp) || (cp >= '0' && cp <= '9'))
                          : (is_pn_chars(cp) || cp == '.');
    if (!ok) break;
    first = false;
    advance(len);
    if (cp != '.') end = pos_;
  }
  if (end == start) fail("empty blank node label");
  // Trailing dots belong to the statement terminator, not the label.
  const std::size_t back = pos_ - end;
  pos_ -= back;
  return rdf::Term::blank(std::string(text_.substr(start, end - start)));
}

}  // namespace tessera::detail
