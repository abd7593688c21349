#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "schenql/corpus.hpp"
#include "schenql/plan.hpp"

namespace schenql {

using Cell = std::variant<std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

struct ResultSet {
  ResultKind kind = ResultKind::entities;
  /// Concept of `ids` for entity results.
  Concept entity_concept = Concept::publication;
  /// Entity indexes in result order.
  IndexList ids;
  std::int64_t scalar = 0;
  Table table;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

/// Runs a plan over the indexed corpus. Throws QueryError (plan_error) when
/// the plan does not validate.
ResultSet evaluate(const LogicalPlan& plan, const Corpus& corpus);

/// Same contract as evaluate, computed record by record over the raw
/// publication, person, venue and institution lists without derived indexes.
/// Meant for differential tests on small corpora.
ResultSet oracle_evaluate(const LogicalPlan& plan, const Corpus& corpus);

/// Multi-line text form listing keys or rows; used in test failure output.
std::string describe(const ResultSet& r, const Corpus& corpus);

std::string cell_to_string(const Cell& c);

}  // namespace schenql
