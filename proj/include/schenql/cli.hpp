#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace schenql {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_query_error = 1,  // lexical, syntax or semantic error; also usage errors
  exit_io_error = 2,
  exit_oracle_mismatch = 3,
};

/// Runs the tool; `args` excludes the program name. REPL input comes from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Fixed-width rendering: header, dashes, then one line per row.
std::string format_columns(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace schenql
