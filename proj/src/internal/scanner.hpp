#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tessera/rdf/term.hpp"

namespace tessera::detail {

/// Cursor over UTF-8 text with line/column tracking and the lexical
/// productions shared by the N-Quads reader and the SPARQL subsets
/// (IRIREF, quoted literals, blank node labels). Failures throw SyntaxError
/// at the current position.
class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t first_line = 1) noexcept
      : text_(text), line_(first_line) {}

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance(std::size_t n = 1) noexcept;

  std::size_t offset() const noexcept { return pos_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return pos_ - line_start_ + 1; }
  std::string_view rest() const noexcept { return text_.substr(pos_); }

  // Spaces and tabs; line breaks too when `newlines`; '#' comments when `comments`.
  void skip_space(bool newlines, bool comments) noexcept;

  bool consume(char c) noexcept;
  // Case-insensitive keyword followed by a non-word character.
  bool consume_keyword(std::string_view keyword) noexcept;
  bool looking_at_keyword(std::string_view keyword) const noexcept;

  rdf::Term read_iri();
  // A double-quoted string with optional @lang or ^^<datatype>.
  rdf::Term read_literal();
  rdf::Term read_blank();
  // [A-Za-z0-9_]* starting at the cursor.
  std::string read_word();

  [[noreturn]] void fail(const std::string& message) const;

 private:
  char32_t read_escape_hex(std::size_t digits);

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t line_start_ = 0;
};

}  // namespace tessera::detail
