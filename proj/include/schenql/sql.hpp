#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "schenql/corpus.hpp"
#include "schenql/evaluator.hpp"
#include "schenql/plan.hpp"

namespace schenql {

/// SQL text plus its positional `?` bindings.
struct SqlArtifact {
  std::string statement;
  std::vector<Cell> parameters;
  ResultKind result = ResultKind::entities;
  /// Output column names: `id` for entities, `value` for scalars.
  std::vector<std::string> columns;
};

class SqlEmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// DDL for the relational schema the emitted statements run against.
std::string emit_schema();

/// Compiles a validated plan; one common table expression per plan node.
/// Constants are bound as entity keys looked up in `corpus`.
/// Entity statements return ids ordered like the evaluator.
SqlArtifact emit(const LogicalPlan& plan, const Corpus& corpus);

/// INSERT statements loading a corpus into the schema, one per row.
std::vector<SqlArtifact> emit_inserts(const Corpus& corpus);

/// Statement followed by a `-- parameters` block, one binding per line.
std::string format_artifact(const SqlArtifact& a);

}  // namespace schenql
