#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "schenql/corpus.hpp"

namespace schenql::testing {

inline std::filesystem::path source_dir() { return SCHENQL_SOURCE_DIR; }
inline std::filesystem::path mini_dir() { return source_dir() / "fixtures" / "mini"; }
inline std::filesystem::path grammar_file() { return source_dir() / "tests" / "support" / "grammar.bnf"; }

/// The fixture corpus, loaded once per process.
inline const Corpus& mini() {
  static const Corpus corpus = load(mini_dir());
  return corpus;
}

/// Non-comment lines of tests/data/sample_queries.txt.
inline std::vector<std::string> sample_queries() {
  std::ifstream in(source_dir() / "tests" / "data" / "sample_queries.txt");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace schenql::testing
