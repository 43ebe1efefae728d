#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace tessera::detail {

inline constexpr std::size_t kNoError = static_cast<std::size_t>(-1);

/// Decodes the code point starting at `pos`; returns its byte length, or 0 on an
/// ill-formed sequence (overlong, surrogate, out of range, truncated).
std::size_t decode_utf8(std::string_view text, std::size_t pos, char32_t& out) noexcept;

/// Offset of the first ill-formed byte, or kNoError.
std::size_t find_invalid_utf8(std::string_view text) noexcept;

void append_utf8(std::string& out, char32_t cp);

bool is_valid_code_point(char32_t cp) noexcept;

// Character classes of the N-Triples blank node label production.
bool is_pn_chars_base(char32_t cp) noexcept;
bool is_pn_chars_u(char32_t cp) noexcept;
bool is_pn_chars(char32_t cp) noexcept;

// Bytes N-Triples forbids unescaped inside an IRIREF.
bool is_forbidden_iri_byte(unsigned char c) noexcept;

}  // namespace tessera::detail
