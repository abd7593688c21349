#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "schenql/diagnostic.hpp"

namespace schenql {

enum class TokenKind : std::uint8_t {
  keyword,
  string_literal,
  number,
  tilde,
  equals,
  lbracket,
  rbracket,
  lparen,
  rparen,
  comma,
};

struct Token {
  TokenKind kind = TokenKind::keyword;
  /// Keyword text, unescaped string contents, digits, or the punctuation character.
  std::string lexeme;
  Span span;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits a query into tokens. Throws QueryError (lexical_error) on an
/// unterminated string, an illegal character, an unknown word or a number
/// that does not fit in 64 bits.
std::vector<Token> tokenize(std::string_view text);

/// True for the upper-case words the language reserves.
bool is_reserved_word(std::string_view word);

/// All reserved words, sorted.
const std::vector<std::string>& reserved_words();

}  // namespace schenql
