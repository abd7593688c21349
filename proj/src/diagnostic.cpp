#include "schenql/diagnostic.hpp"

namespace schenql {

std::string_view diagnostic_code_name(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::lexical_error: return "lexical_error";
    case DiagnosticCode::syntax_error: return "syntax_error";
    case DiagnosticCode::semantic_error: return "semantic_error";
    case DiagnosticCode::resolution_warning: return "resolution_warning";
    case DiagnosticCode::plan_error: return "plan_error";
  }
  return "";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out(diagnostic_code_name(d.code));
  if (d.span) out += " at " + std::to_string(d.span->start) + ".." + std::to_string(d.span->end);
  if (d.node) out += " (node n" + std::to_string(*d.node) + ")";
  out += ": " + d.message;
  return out;
}

}  // namespace schenql
