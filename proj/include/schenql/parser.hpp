#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schenql/ast.hpp"
#include "schenql/diagnostic.hpp"

namespace schenql {

/// Parses a complete query. Throws QueryError with a lexical_error or
/// syntax_error diagnostic; syntax errors list the expected next tokens.
Query parse(std::string_view text);

/// Canonical text: plural concept words, explicit AND, single spaces.
std::string render(const Query& q);
std::string render(const FilterExpr& f);

enum class SuggestionCategory : std::uint8_t {
  base_concept,
  filter,
  literal_placeholder,
  restriction,
  operator_,
  function,
};

std::string_view suggestion_category_name(SuggestionCategory c);

struct Suggestion {
  std::string token;
  SuggestionCategory category = SuggestionCategory::filter;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct SuggestResult {
  /// Sorted by category, then token.
  std::vector<Suggestion> suggestions;
  /// Lexical error, or a syntax error that no continuation can repair.
  std::optional<Diagnostic> diagnostic;
  /// The prefix is already a complete query.
  bool complete = false;
};

/// Grammatically valid continuations of `prefix`. Multi-word terminals such
/// as "AT LEAST" are offered whole; once partly typed, their remaining words
/// are offered. Placeholders: NUMBER and "STRING".
SuggestResult suggest(std::string_view prefix);

}  // namespace schenql
