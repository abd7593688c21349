#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schenql/corpus.hpp"

namespace schenql {

std::string ascii_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Length in Unicode scalar values; malformed bytes count as one each.
std::size_t utf8_length(std::string_view s);

/// Lowercased runs of non-separator characters. Bytes >= 0x80 are word
/// characters, ASCII punctuation and whitespace separate words.
std::vector<std::string> word_tokens(std::string_view text);

/// Removes a trailing " dddd" disambiguation suffix, if present.
std::string_view strip_name_suffix(std::string_view name);

/// Name matching under the three literal modes.
///
/// standard: equal after dropping the candidate's numeric suffix, ignoring case.
/// fuzzy:    every pattern word occurs among the candidate's words.
/// strict:   byte-exact equality.
bool match_name(std::string_view candidate, std::string_view pattern, NameMatchMode mode);

/// Boolean full-text expression: `:` is AND, `|` is OR, parentheses group.
struct TermExpr {
  struct Word {
    std::string token;
    friend bool operator==(const Word&, const Word&) = default;
  };
  struct And {
    std::vector<TermExpr> children;
    friend bool operator==(const And&, const And&) = default;
  };
  struct Or {
    std::vector<TermExpr> children;
    friend bool operator==(const Or&, const Or&) = default;
  };
  std::variant<Word, And, Or> node;

  friend bool operator==(const TermExpr&, const TermExpr&) = default;
};

class TermSyntaxError : public std::runtime_error {
 public:
  TermSyntaxError(std::string message, std::size_t offset)
      : std::runtime_error(std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

TermExpr parse_terms(std::string_view literal);
bool match_terms(std::string_view text, const TermExpr& expr);
/// Words of an expression, in first-occurrence order.
std::vector<std::string> term_words(const TermExpr& expr);
std::string render_terms(const TermExpr& expr);
/// Text searched by TERMS: title and abstract.
std::string searchable_text(const Publication& p);

}  // namespace schenql
