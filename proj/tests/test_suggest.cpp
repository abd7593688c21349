#include <gtest/gtest.h>

#include <algorithm>

#include "schenql/parser.hpp"

namespace schenql {
namespace {

using Cat = SuggestionCategory;

std::vector<std::string> tokens_of(const SuggestResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.suggestions) out.push_back(s.token);
  return out;
}

bool has(const SuggestResult& r, std::string_view token, Cat cat) {
  return std::find(r.suggestions.begin(), r.suggestions.end(), Suggestion{std::string(token), cat}) !=
         r.suggestions.end();
}

TEST(Suggest, EmptyPrefixOffersStarters) {
  auto r = suggest("");
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.diagnostic);
  for (const char* c : {"CONFERENCES", "JOURNALS", "KEYWORDS", "PUBLICATIONS", "PERSONS", "INSTITUTIONS"}) {
    EXPECT_TRUE(has(r, c, Cat::base_concept)) << c;
  }
  EXPECT_TRUE(has(r, "COUNT", Cat::function));
  EXPECT_TRUE(has(r, "MOST CITED", Cat::function));
  EXPECT_TRUE(has(r, "NUMBER", Cat::restriction));
  EXPECT_TRUE(has(r, "~", Cat::restriction));
  EXPECT_TRUE(has(r, "[", Cat::function));
}

TEST(Suggest, SpecialisationsAreNotOffered) {
  auto t = tokens_of(suggest(""));
  for (const char* s : {"ARTICLES", "ARTICLE", "BOOKS", "AUTHORS", "EDITORS", "PROCEEDINGS", "PHDTHESISS"}) {
    EXPECT_EQ(std::count(t.begin(), t.end(), s), 0) << s;
  }
  EXPECT_EQ(std::count(t.begin(), t.end(), "PERSON"), 1);
  // The words are still accepted.
  EXPECT_TRUE(suggest("AUTHORS").complete);
}

TEST(Suggest, NamedFollowSet) {
  auto r = suggest("PERSONS NAMED");
  EXPECT_EQ(r.suggestions, (std::vector<Suggestion>{{"\"STRING\"", Cat::literal_placeholder},
                                                    {"=", Cat::literal_placeholder},
                                                    {"~", Cat::literal_placeholder}}));
  EXPECT_FALSE(r.complete);
  // Institutions have no strict mode.
  EXPECT_EQ(tokens_of(suggest("INSTITUTIONS NAMED")), (std::vector<std::string>{"\"STRING\"", "~"}));
}

TEST(Suggest, AfterCompleteFilter) {
  auto r = suggest(R"(CONFERENCE WITH ACRONYM "JCDL")");
  EXPECT_TRUE(r.complete);
  for (const char* op : {"AND", "OR", "AND NOT", "OR NOT"}) EXPECT_TRUE(has(r, op, Cat::operator_)) << op;
  for (const char* f : {"WITH DBLPKEY", "NAMED", "ABOUT", "WITH ACRONYM", "WITH YEAR", "OF", "WITH"}) {
    EXPECT_TRUE(has(r, f, Cat::filter)) << f;
  }
  EXPECT_FALSE(has(r, "WITH VOLUME", Cat::filter));
  EXPECT_TRUE(has(suggest(R"(JOURNALS WITH ACRONYM "JODL")"), "WITH VOLUME", Cat::filter));
}

TEST(Suggest, PartlyTypedPhrases) {
  EXPECT_EQ(tokens_of(suggest("PUBLICATIONS WITH YEAR AT")), (std::vector<std::string>{"LEAST", "MOST"}));
  auto r = suggest("MOST");
  EXPECT_TRUE(has(r, "CITED", Cat::function));
  EXPECT_TRUE(has(r, "FREQUENT KEYWORDS OF", Cat::function));
  EXPECT_TRUE(has(r, "FREQUENT", Cat::function));
  EXPECT_TRUE(has(r, "RESEARCHING", Cat::function));
}

TEST(Suggest, Ordering) {
  auto r = suggest("PERSONS");
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(std::is_sorted(r.suggestions.begin(), r.suggestions.end(), [](const Suggestion& a, const Suggestion& b) {
    return a.category != b.category ? a.category < b.category : a.token < b.token;
  }));
  // No token appears twice.
  auto t = tokens_of(r);
  std::sort(t.begin(), t.end());
  EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
}

TEST(Suggest, NestedQueryCloses) {
  auto r = suggest("COUNT ( PERSONS");
  EXPECT_TRUE(has(r, ")", Cat::operator_));
  EXPECT_TRUE(has(r, "NAMED", Cat::filter));
  EXPECT_TRUE(suggest("COUNT ( PERSONS )").suggestions.empty());
  EXPECT_TRUE(suggest("COUNT ( PERSONS )").complete);
}

TEST(Suggest, LexicalErrorGivesDiagnosticOnly) {
  auto r = suggest(R"(PERSONS NAMED "open)");
  EXPECT_TRUE(r.suggestions.empty());
  ASSERT_TRUE(r.diagnostic);
  EXPECT_EQ(r.diagnostic->code, DiagnosticCode::lexical_error);
}

TEST(Suggest, DeadPrefixGivesSyntaxError) {
  auto r = suggest("PERSONS )");
  EXPECT_TRUE(r.suggestions.empty());
  EXPECT_FALSE(r.complete);
  ASSERT_TRUE(r.diagnostic);
  EXPECT_EQ(r.diagnostic->code, DiagnosticCode::syntax_error);
}

TEST(Suggest, CategoryNames) {
  EXPECT_EQ(suggestion_category_name(Cat::base_concept), "base_concept");
  EXPECT_EQ(suggestion_category_name(Cat::literal_placeholder), "literal_placeholder");
  EXPECT_EQ(suggestion_category_name(Cat::operator_), "operator");
  EXPECT_EQ(suggestion_category_name(Cat::function), "function");
}

}  // namespace
}  // namespace schenql
