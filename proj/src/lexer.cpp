#include "schenql/lexer.hpp"

#include <algorithm>
#include <limits>

namespace schenql {

namespace {

const std::vector<std::string> kReservedWords = [] {
  std::vector<std::string> words = {
      "ABOUT",        "ABSTRACT",      "ACRONYM",      "ALTERNATIVE",   "AND",         "ANY",
      "APPEARED",     "ARTICLE",       "ARTICLES",     "AT",            "AUTHOR",      "AUTHORED",
      "AUTHORS",      "BOOK",          "BOOKS",        "BY",            "CITATIONS",   "CITED",
      "CITY",         "COAUTHORS",     "CONFERENCE",   "CONFERENCES",   "CORE",        "CORERANK",
      "COUNT",        "COUNTRY",       "DBLPKEY",      "DISTINCT",      "DOI",         "EDITED",
      "EDITOR",       "EDITORS",       "FOR",          "FREQUENT",      "FROM",        "H-AVG",
      "HIGHEST",      "IN",            "INCOLLECTION", "INCOLLECTIONS", "INPROCEEDING", "INPROCEEDINGS",
      "INSTITUTION",  "INSTITUTIONS",  "ISBN",         "JOURNAL",       "JOURNALS",    "KEYWORD",
      "KEYWORDS",     "LEAST",         "LENGTH",       "LESS",          "LOCATION",    "LONGEST",
      "LOWEST",       "MASTERTHESIS",  "MASTERTHESISS", "MEMBERS",      "METRIC",      "MORE",
      "MOST",         "NAME",          "NAMED",        "NAMES",         "NEWEST",      "NO",
      "NOT",          "OF",            "OLDEST",       "ONLY",          "OR",          "ORCID",
      "PERSON",       "PERSONS",       "PHDTHESIS",    "PHDTHESISS",    "PROCEEDING",  "PROCEEDINGS",
      "PUBLICATION",  "PUBLICATIONS",  "PUBLISHED",    "PUBLISHING",    "RANKS",       "REFERENCES",
      "RELATED",      "RESEARCHING",   "SHORTEST",     "TERMS",         "THAN",        "TITLE",
      "TITLED",       "TO",            "VOLUME",       "WITH",          "WORKS",       "WRITTEN",
      "YEAR",
  };
  std::sort(words.begin(), words.end());
  return words;
}();

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word_char(char c) { return is_alpha(c) || is_digit(c) || c == '_' || c == '-'; }

[[noreturn]] void lex_error(std::string message, std::size_t start, std::size_t end) {
  Diagnostic d;
  d.code = DiagnosticCode::lexical_error;
  d.message = std::move(message);
  d.span = Span{start, end};
  throw QueryError(std::move(d));
}

}  // namespace

bool is_reserved_word(std::string_view word) {
  return std::binary_search(kReservedWords.begin(), kReservedWords.end(), word);
}

const std::vector<std::string>& reserved_words() { return kReservedWords; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](TokenKind kind) {
      out.push_back(Token{kind, std::string(1, c), Span{start, start + 1}});
      ++i;
    };
    switch (c) {
      case '~': single(TokenKind::tilde); continue;
      case '=': single(TokenKind::equals); continue;
      case '[': single(TokenKind::lbracket); continue;
      case ']': single(TokenKind::rbracket); continue;
      case '(': single(TokenKind::lparen); continue;
      case ')': single(TokenKind::rparen); continue;
      case ',': single(TokenKind::comma); continue;
      default: break;
    }
    if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        char s = text[i];
        if (s == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
          value.push_back(text[i + 1]);
          i += 2;
        } else if (s == '"') {
          ++i;
          closed = true;
          break;
        } else {
          value.push_back(s);
          ++i;
        }
      }
      if (!closed) lex_error("unterminated string literal", start, text.size());
      out.push_back(Token{TokenKind::string_literal, std::move(value), Span{start, i}});
      continue;
    }
    if (is_digit(c)) {
      while (i < text.size() && is_digit(text[i])) ++i;
      std::string digits(text.substr(start, i - start));
      std::uint64_t value = 0;
      for (char d : digits) {
        auto digit = static_cast<std::uint64_t>(d - '0');
        if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
          lex_error("number out of range", start, i);
        }
        value = value * 10 + digit;
      }
      out.push_back(Token{TokenKind::number, std::move(digits), Span{start, i}});
      continue;
    }
    if (is_alpha(c)) {
      while (i < text.size() && is_word_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      if (!is_reserved_word(word)) lex_error("unknown keyword '" + word + "'", start, i);
      out.push_back(Token{TokenKind::keyword, std::move(word), Span{start, i}});
      continue;
    }
    std::size_t end = start + 1;
    auto lead = static_cast<unsigned char>(c);
    if (lead >= 0xC0) {
      while (end < text.size() && (static_cast<unsigned char>(text[end]) & 0xC0) == 0x80) ++end;
    }
    lex_error("illegal character '" + std::string(text.substr(start, end - start)) + "'", start, end);
  }
  return out;
}

}  // namespace schenql
