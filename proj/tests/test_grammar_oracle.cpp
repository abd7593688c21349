// The parser against an independent Earley recognizer over grammar.bnf.

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grammar.hpp"
#include "schenql/lexer.hpp"
#include "schenql/parser.hpp"

namespace schenql::testing {
namespace {

const Grammar& grammar() {
  static const Grammar g = Grammar::load(grammar_file());
  return g;
}

bool parses(const std::string& text) {
  try {
    parse(text);
    return true;
  } catch (const QueryError&) {
    return false;
  }
}

std::string show(const std::vector<Suggestion>& s) {
  std::string out;
  for (const auto& x : s) out += "  " + x.token + " /" + std::string(suggestion_category_name(x.category)) + "\n";
  return out;
}

TEST(GrammarOracle, LoadsAndHasNoDeadRules) {
  const Grammar& g = grammar();
  EXPECT_GT(g.alternatives().size(), 200u);
  EXPECT_NE(g.find("q_any"), -1);
  EXPECT_FALSE(g.nullable(g.start()));
}

TEST(GrammarOracle, RejectsMalformedGrammarText) {
  EXPECT_THROW(Grammar::parse_text("start ::= undefined_thing\n"), std::invalid_argument);
  EXPECT_THROW(Grammar::parse_text("start ::= 'A'\n"), std::invalid_argument);
  EXPECT_THROW(Grammar::parse_text("other ::= 'A'/f\n"), std::invalid_argument);
  EXPECT_NO_THROW(Grammar::parse_text("start ::= 'A B'/f x\nx ::= EMPTY | STRING:s/l\n"));
}

TEST(GrammarOracle, TableQueriesAreSentences) {
  for (const auto& q : sample_queries()) {
    auto r = earley(grammar(), tokenize(q));
    EXPECT_TRUE(r.accepted) << q;
  }
}

TEST(GrammarOracle, GeneratedSentencesParse) {
  Generator gen(grammar(), pools_from(mini()), 7);
  for (int i = 0; i < 1500; ++i) {
    std::string q = gen.next();
    ASSERT_TRUE(earley(grammar(), tokenize(q)).accepted) << q;
    EXPECT_TRUE(parses(q)) << q;
  }
  EXPECT_EQ(gen.covered(), gen.total()) << ::testing::PrintToString(gen.uncovered());
}

// Token-level edits of valid queries: the parser and the recognizer must
// agree on which results are still queries.
TEST(GrammarOracle, MutantsAcceptedExactlyWhenGrammarAccepts) {
  Generator gen(grammar(), pools_from(mini()), 11);
  std::mt19937_64 rng(99);
  int agreed_rejections = 0;
  for (int i = 0; i < 600; ++i) {
    std::string q = gen.next();
    auto tokens = tokenize(q);
    std::vector<std::string> texts;
    for (const auto& t : tokens) texts.push_back(q.substr(t.span.start, t.span.end - t.span.start));
    std::size_t at = std::uniform_int_distribution<std::size_t>(0, texts.size() - 1)(rng);
    std::size_t other = std::uniform_int_distribution<std::size_t>(0, texts.size() - 1)(rng);
    switch (i % 3) {
      case 0: texts.erase(texts.begin() + static_cast<long>(at)); break;
      case 1: texts.insert(texts.begin() + static_cast<long>(at), texts[other]); break;
      default: std::swap(texts[at], texts[other]); break;
    }
    std::string mutant;
    for (const auto& t : texts) mutant += (mutant.empty() ? "" : " ") + t;
    bool grammar_ok = earley(grammar(), tokenize(mutant)).accepted;
    EXPECT_EQ(parses(mutant), grammar_ok) << mutant;
    if (!grammar_ok) ++agreed_rejections;
  }
  EXPECT_GT(agreed_rejections, 100);
}

TEST(GrammarOracle, SuggestionsMatchRecognizer) {
  Generator gen(grammar(), pools_from(mini()), 23);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    std::string q = gen.next();
    auto tokens = tokenize(q);
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, tokens.size())(rng);
    std::string prefix = k == 0 ? "" : q.substr(0, tokens[k - 1].span.end);
    std::vector<Token> head(tokens.begin(), tokens.begin() + static_cast<long>(k));
    auto expected = earley(grammar(), head);
    auto got = suggest(prefix);
    EXPECT_EQ(got.suggestions, expected.suggestions)
        << "prefix: " << prefix << "\nsuggest:\n" << show(got.suggestions) << "grammar:\n" << show(expected.suggestions);
    EXPECT_EQ(got.complete, expected.accepted) << prefix;
    for (const auto& s : got.suggestions) {
      const auto& completions = expected.completions[s.token];
      bool any = false;
      for (const auto& c : completions) any = any || parses(prefix + " " + c);
      EXPECT_TRUE(any) << "no parsable completion for '" << s.token << "' after: " << prefix;
    }
  }
}

}  // namespace
}  // namespace schenql::testing
