#include "schenql/cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "schenql/corpus.hpp"
#include "schenql/evaluator.hpp"
#include "schenql/parser.hpp"
#include "schenql/plan.hpp"
#include "schenql/service.hpp"
#include "schenql/sql.hpp"
#include "schenql/text_match.hpp"

namespace schenql {

std::string format_columns(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = utf8_length(header[c]);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], utf8_length(row[c]));
  }
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string& v = c < cells.size() ? cells[c] : std::string();
      l += v;
      if (c + 1 < width.size()) l += std::string(width[c] - utf8_length(v) + 2, ' ');
    }
    out += l + "\n";
  };
  line(header);
  std::vector<std::string> dashes;
  for (auto w : width) dashes.emplace_back(w, '-');
  line(dashes);
  for (const auto& row : rows) line(row);
  return out;
}

namespace {

std::string format_result(const ResultSet& r, const Corpus& corpus) {
  std::vector<std::vector<std::string>> rows;
  switch (r.kind) {
    case ResultKind::scalar: return std::to_string(r.scalar) + "\n";
    case ResultKind::entities:
      for (auto id : r.ids) {
        rows.push_back({std::string(corpus.key_of(r.entity_concept, id)), std::string(corpus.label_of(r.entity_concept, id))});
      }
      return format_columns({"id", "label"}, rows);
    case ResultKind::table:
      for (const auto& row : r.table.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(cell_to_string(c));
        rows.push_back(std::move(cells));
      }
      return format_columns(r.table.columns, rows);
  }
  return "";
}

void print_warnings(const std::vector<Diagnostic>& ds, std::ostream& err) {
  for (const auto& d : ds) err << format_diagnostic(d) << "\n";
}

std::optional<Corpus> load_corpus(const std::string& dir, std::ostream& err) {
  try {
    return load(dir);
  } catch (const std::exception& e) {
    err << "error: cannot load corpus from '" << dir << "': " << e.what() << "\n";
    return std::nullopt;
  }
}

int run_one(const Corpus& corpus, const std::string& text, bool json, bool oracle, std::ostream& out, std::ostream& err) {
  QueryOutcome q = run_query(corpus, text);
  if (json) {
    std::size_t size = 1;
    if (q.result) size = std::max<std::size_t>(1, q.result->ids.size());
    out << query_response(q, corpus, 1, size).dump(2) << "\n";
  }
  if (!q.result) {
    if (!json) print_warnings(q.diagnostics, err);
    return exit_query_error;
  }
  if (!json) {
    print_warnings(q.diagnostics, err);
    out << format_result(*q.result, corpus);
  }
  if (oracle) {
    LogicalPlan plan = lower(parse(text), corpus);
    ResultSet expected = oracle_evaluate(plan, corpus);
    if (!(expected == *q.result)) {
      err << "oracle mismatch\nevaluate:\n" << describe(*q.result, corpus) << "oracle:\n" << describe(expected, corpus);
      return exit_oracle_mismatch;
    }
  }
  return exit_ok;
}

void print_suggestions(const SuggestResult& s, std::ostream& out) {
  for (const auto& x : s.suggestions) out << x.token << "\t" << suggestion_category_name(x.category) << "\n";
}

int repl(const Corpus& corpus, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string line;
  out << "schenql> " << std::flush;
  while (std::getline(in, line)) {
    // A trailing tab asks for completions of the text before it.
    if (!line.empty() && line.back() == '\t') {
      line.pop_back();
      print_suggestions(suggest(line), out);
    } else if (line == ":quit" || line == ":q") {
      break;
    } else if (line.rfind(":suggest", 0) == 0) {
      std::string prefix = line.size() > 9 ? line.substr(9) : "";
      auto s = suggest(prefix);
      print_suggestions(s, out);
      if (s.diagnostic) err << format_diagnostic(*s.diagnostic) << "\n";
    } else if (line.find_first_not_of(" \t") != std::string::npos) {
      run_one(corpus, line, false, false, out, err);
    }
    out << "schenql> " << std::flush;
  }
  out << "\n";
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query bibliographic metadata with SchenQL", "schenql"};
  app.require_subcommand(1);

  std::string data;
  std::string text;
  std::string format = "table";
  bool oracle = false;
  bool schema = false;
  std::string prefix;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* query = app.add_subcommand("query", "Run a query against a corpus");
  query->add_option("--data", data, "Corpus directory")->envname("SCHENQL_DATA")->required();
  query->add_option("--query", text, "Query text")->required();
  query->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
  query->add_flag("--oracle", oracle, "Compare with the reference evaluator");

  auto* emit_sql = app.add_subcommand("emit-sql", "Print the SQL for a query");
  emit_sql->add_option("--data", data, "Corpus directory used to resolve literals")->envname("SCHENQL_DATA");
  emit_sql->add_option("--query", text, "Query text");
  emit_sql->add_flag("--schema", schema, "Print the schema DDL");

  auto* suggest_cmd = app.add_subcommand("suggest", "List next tokens for a prefix");
  suggest_cmd->add_option("--prefix", prefix, "Query prefix")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--data", data, "Corpus directory")->envname("SCHENQL_DATA")->required();
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  auto* repl_cmd = app.add_subcommand("repl", "Interactive query loop");
  repl_cmd->add_option("--data", data, "Corpus directory")->envname("SCHENQL_DATA")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_query_error;
  }

  if (query->parsed()) {
    auto corpus = load_corpus(data, err);
    if (!corpus) return exit_io_error;
    return run_one(*corpus, text, format == "json", oracle, out, err);
  }

  if (emit_sql->parsed()) {
    if (!schema && text.empty()) {
      err << "error: emit-sql needs --query or --schema\n";
      return exit_query_error;
    }
    if (schema) out << emit_schema();
    if (text.empty()) return exit_ok;
    // Without a corpus every literal stays unresolved and compiles to an empty set.
    Corpus corpus;
    if (!data.empty()) {
      auto loaded = load_corpus(data, err);
      if (!loaded) return exit_io_error;
      corpus = std::move(*loaded);
    }
    try {
      LogicalPlan plan = lower(parse(text), corpus);
      print_warnings(plan.warnings, err);
      out << format_artifact(emit(plan, corpus));
    } catch (const QueryError& e) {
      err << format_diagnostic(e.diagnostic()) << "\n";
      return exit_query_error;
    }
    return exit_ok;
  }

  if (suggest_cmd->parsed()) {
    SuggestResult s = suggest(prefix);
    print_suggestions(s, out);
    if (s.diagnostic) {
      err << format_diagnostic(*s.diagnostic) << "\n";
      return exit_query_error;
    }
    return exit_ok;
  }

  if (serve_cmd->parsed()) {
    auto corpus = load_corpus(data, err);
    if (!corpus) return exit_io_error;
    err << "listening on " << host << ":" << port << "\n";
    if (!serve(*corpus, host, port)) {
      err << "error: cannot bind " << host << ":" << port << "\n";
      return exit_io_error;
    }
    return exit_ok;
  }

  auto corpus = load_corpus(data, err);
  if (!corpus) return exit_io_error;
  return repl(*corpus, in, out, err);
}

}  // namespace schenql
