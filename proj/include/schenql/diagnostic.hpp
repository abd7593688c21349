#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schenql {

/// Half-open byte range into the query text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class DiagnosticCode : std::uint8_t {
  lexical_error,
  syntax_error,
  semantic_error,
  resolution_warning,
  plan_error,
};

std::string_view diagnostic_code_name(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code = DiagnosticCode::syntax_error;
  std::string message;
  std::optional<Span> span;
  /// Expected next tokens; only filled for syntax errors.
  std::vector<std::string> expected;
  /// Plan node the diagnostic refers to, if any.
  std::optional<std::uint32_t> node;

  bool is_error() const { return code != DiagnosticCode::resolution_warning; }
};

/// Raised for lexical, syntax and semantic errors.
class QueryError : public std::runtime_error {
 public:
  explicit QueryError(Diagnostic diagnostic)
      : std::runtime_error(diagnostic.message), diagnostic_(std::move(diagnostic)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

/// Human-readable single-line rendering, e.g. "syntax error at 14..18: ...".
std::string format_diagnostic(const Diagnostic& d);

}  // namespace schenql
