#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "schenql/corpus.hpp"
#include "schenql/evaluator.hpp"
#include "schenql/sql.hpp"

struct sqlite3;

namespace schenql::testing {

class SqliteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory SQLite database holding one corpus in the emitted schema.
class SqliteBackend {
 public:
  explicit SqliteBackend(const Corpus& corpus);
  ~SqliteBackend();
  SqliteBackend(const SqliteBackend&) = delete;
  SqliteBackend& operator=(const SqliteBackend&) = delete;

  /// Runs an emitted statement and converts the rows like evaluate() would.
  ResultSet run(const LogicalPlan& plan);
  ResultSet run(const SqlArtifact& artifact, Concept output_concept);

  std::int64_t count_rows(const std::string& table);

 private:
  void exec(const std::string& sql);

  const Corpus& corpus_;
  sqlite3* db_ = nullptr;
};

}  // namespace schenql::testing
