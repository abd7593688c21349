#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grammar.hpp"
#include "schenql/lexer.hpp"
#include "schenql/parser.hpp"

namespace schenql::testing {
namespace {

Diagnostic error_of(std::string_view text) {
  try {
    parse(text);
  } catch (const QueryError& e) {
    return e.diagnostic();
  }
  ADD_FAILURE() << "expected an error for: " << text;
  return {};
}

const FilterLeaf& only_leaf(const Query& q) {
  return std::get<FilterLeaf>(*std::get<EntityQuery>(q.body).filter);
}

TEST(Lexer, TokenKindsAndSpans) {
  auto t = tokenize(R"(PERSON NAMED "Christine Betts")");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], (Token{TokenKind::keyword, "PERSON", Span{0, 6}}));
  EXPECT_EQ(t[1], (Token{TokenKind::keyword, "NAMED", Span{7, 12}}));
  EXPECT_EQ(t[2], (Token{TokenKind::string_literal, "Christine Betts", Span{13, 30}}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  \n\t").empty());
}

TEST(Lexer, Punctuation) {
  auto t = tokenize(R"(~5 =[ ] ( ) , H-AVG 007)");
  std::vector<TokenKind> kinds;
  for (const auto& x : t) kinds.push_back(x.kind);
  EXPECT_EQ(kinds, (std::vector<TokenKind>{TokenKind::tilde, TokenKind::number, TokenKind::equals, TokenKind::lbracket,
                                           TokenKind::rbracket, TokenKind::lparen, TokenKind::rparen, TokenKind::comma,
                                           TokenKind::keyword, TokenKind::number}));
  EXPECT_EQ(t[8].lexeme, "H-AVG");
  EXPECT_EQ(t[9].lexeme, "007");
}

TEST(Lexer, StringEscapes) {
  auto t = tokenize(R"("a \"b\" \\ c" "ü")");
  EXPECT_EQ(t[0].lexeme, R"(a "b" \ c)");
  EXPECT_EQ(t[1].lexeme, "ü");
}

TEST(Lexer, Errors) {
  auto lex_error = [](std::string_view text) -> Diagnostic {
    try {
      tokenize(text);
    } catch (const QueryError& e) {
      return e.diagnostic();
    }
    return {};
  };
  auto d = lex_error(R"(PERSON NAMED "unclosed)");
  EXPECT_EQ(d.code, DiagnosticCode::lexical_error);
  EXPECT_EQ(d.span->start, 13u);
  d = lex_error("PERSONS ; COUNT");
  EXPECT_EQ(d.code, DiagnosticCode::lexical_error);
  EXPECT_EQ(d.span, (Span{8, 9}));
  EXPECT_EQ(lex_error("persons").code, DiagnosticCode::lexical_error);
  EXPECT_EQ(lex_error("WORKING").code, DiagnosticCode::lexical_error);
  EXPECT_EQ(lex_error("99999999999999999999999").code, DiagnosticCode::lexical_error);
  EXPECT_NO_THROW(tokenize("18446744073709551615"));
  EXPECT_EQ(lex_error("PERSONS NAMED é").span, (Span{14, 16}));
}

TEST(Parser, TableQueriesParse) {
  auto qs = sample_queries();
  ASSERT_EQ(qs.size(), 28u);
  for (const auto& q : qs) EXPECT_NO_THROW(parse(q)) << q;
}

TEST(Parser, TableQueriesRoundTrip) {
  for (const auto& q : sample_queries()) {
    Query a = parse(q);
    std::string r = render(a);
    Query b = parse(r);
    EXPECT_EQ(a, b) << q << "\n" << r;
    EXPECT_EQ(render(b), r);
  }
}

TEST(Parser, GeneratedQueriesRoundTrip) {
  Grammar g = Grammar::load(grammar_file());
  Generator gen(g, pools_from(mini()), 31);
  for (int i = 0; i < 1000; ++i) {
    std::string q = gen.next();
    Query a = parse(q);
    std::string r = render(a);
    EXPECT_EQ(parse(r), a) << q << "\n" << r;
  }
}

TEST(Parser, CoauthorsOf) {
  Query q = parse(R"(COAUTHORS OF "Adam Jatowt")");
  const auto& a = std::get<AggregationQuery>(q.body);
  EXPECT_EQ(a.kind, AggregationKind::coauthors_of);
  ASSERT_EQ(a.args.size(), 1u);
  const auto& lit = std::get<Literal>(a.args[0]);
  EXPECT_EQ(lit.kinds, (std::vector<Concept>{Concept::person}));
  EXPECT_EQ(lit.values, (std::vector<std::string>{"Adam Jatowt"}));
}

TEST(Parser, ImplicitAndIsMaterialised) {
  Query implicit = parse("ARTICLES WITH YEAR AT LEAST 2010 WITH YEAR AT MOST 2020");
  Query explicit_and = parse("ARTICLES WITH YEAR AT LEAST 2010 AND WITH YEAR AT MOST 2020");
  EXPECT_EQ(implicit, explicit_and);
  const auto& e = std::get<EntityQuery>(implicit.body);
  EXPECT_EQ(e.specialisation, Specialisation::article);
  const auto& b = std::get<FilterBinary>(*e.filter);
  EXPECT_EQ(b.op, BoolOp::and_);
  EXPECT_EQ(std::get<FilterLeaf>(*b.lhs).comparator, Comparator::at_least);
  EXPECT_EQ(render(implicit), "ARTICLES WITH YEAR AT LEAST 2010 AND WITH YEAR AT MOST 2020");
}

TEST(Parser, OperatorsAreLeftAssociative) {
  Query q = parse(R"(PERSONS NAMED "a" OR NAMED "b" AND NOT NAMED "c")");
  const auto& top = std::get<FilterBinary>(*std::get<EntityQuery>(q.body).filter);
  EXPECT_EQ(top.op, BoolOp::and_not);
  EXPECT_EQ(std::get<FilterBinary>(*top.lhs).op, BoolOp::or_);
  EXPECT_EQ(std::get<FilterLeaf>(*top.rhs).text, "c");
}

TEST(Parser, SingularAndPluralNormalise) {
  EXPECT_EQ(parse("ARTICLE WITH YEAR 2022"), parse("ARTICLES WITH YEAR 2022"));
  EXPECT_EQ(render(parse("ARTICLE WITH YEAR 2022")), "ARTICLES WITH YEAR 2022");
  EXPECT_EQ(parse(R"(RELATED KEYWORD TO "x")"), parse(R"(RELATED KEYWORDS TO "x")"));
  EXPECT_EQ(parse(R"(PUBLICATIONS ABOUT KEYWORD "x")"), parse(R"(PUBLICATIONS ABOUT KEYWORDS "x")"));
  EXPECT_EQ(parse(R"(PUBLICATIONS ABOUT KEYWORD "x")"), parse(R"(PUBLICATIONS ABOUT "x")"));
}

TEST(Parser, NameModesAndRestrictions) {
  EXPECT_EQ(only_leaf(parse(R"(PERSONS NAMED ~"wang wei")")).mode, NameMatchMode::fuzzy);
  EXPECT_EQ(only_leaf(parse(R"(PERSONS NAMED ="Wei Wang")")).mode, NameMatchMode::strict);
  EXPECT_EQ(only_leaf(parse(R"(PERSONS NAMED "Wei Wang")")).mode, NameMatchMode::standard);
  EXPECT_THROW(parse(R"(INSTITUTIONS NAMED ="Trier University")"), QueryError);

  Query q = parse(R"(10 ~ 3 MOST CITED (PUBLICATIONS))");
  EXPECT_EQ(q.limit, 10u);
  EXPECT_EQ(q.rank, 3u);
  const auto& leaf = only_leaf(parse("PERSONS WITH ~5 LONGEST NAME"));
  EXPECT_EQ(leaf.kind, FilterKind::extreme_length);
  EXPECT_EQ(leaf.rank, 5u);
  EXPECT_EQ(leaf.direction, Direction::descending);
}

TEST(Parser, FilterDetails) {
  const auto& any = only_leaf(parse(R"(PUBLICATIONS WRITTEN BY ANY DISTINCT 2 OF ["a", (PERSONS), ~"c"])"));
  EXPECT_EQ(any.kind, FilterKind::written_by_any);
  EXPECT_TRUE(any.distinct);
  EXPECT_EQ(any.number, 2u);
  EXPECT_EQ(any.args.size(), 3u);

  const auto& metric = only_leaf(parse(R"(CONFERENCES WITH CORERANK METRIC AT LEAST "A")"));
  EXPECT_EQ(metric.kind, FilterKind::metric_compare);
  EXPECT_TRUE(metric.value_is_string);
  EXPECT_EQ(metric.text, "A");

  const auto& count = only_leaf(parse(R"(PERSONS WITH MORE THAN 3 COAUTHORS IN (PUBLICATIONS WITH YEAR 2020))"));
  EXPECT_EQ(count.kind, FilterKind::count_coauthors);
  EXPECT_EQ(count.comparator, Comparator::more_than);
  EXPECT_EQ(count.args.size(), 1u);

  const auto& most = only_leaf(parse("PUBLICATIONS WITH LEAST CITATIONS"));
  EXPECT_EQ(most.kind, FilterKind::most_citations);
  EXPECT_EQ(most.direction, Direction::ascending);

  const auto& kw = only_leaf(parse(R"(PUBLICATIONS ABOUT KEYWORD ["digital libraries", "search"])"));
  const auto& lit = std::get<Literal>(kw.args[0]);
  EXPECT_TRUE(lit.bracketed);
  EXPECT_EQ(lit.values.size(), 2u);
}

TEST(Parser, FunctionQueries) {
  Query q = parse(R"(["Name", "ORCID"] OF (PERSONS))");
  const auto& f = std::get<FunctionQuery>(q.body);
  EXPECT_EQ(f.kind, FunctionKind::attributes_of);
  EXPECT_EQ(f.attributes, (std::vector<std::string>{"name", "orcid"}));
  EXPECT_EQ(std::get<FunctionQuery>(parse(R"(CORE RANKS FOR "Wei Wang" IN (CONFERENCES))").body).args.size(), 2u);
  EXPECT_FALSE(query_concept(parse("COUNT (PERSONS)")).has_value());
  EXPECT_EQ(query_concept(parse(R"(MOST RESEARCHING (INSTITUTIONS) ABOUT "x")")), Concept::institution);
  EXPECT_EQ(std::get<AggregationQuery>(parse(R"(MOST RESEARCHING (INSTITUTIONS) ABOUT "x")").body).kind,
            AggregationKind::most_researching_institution);
}

TEST(Parser, SyntaxErrorsCarrySpanAndExpectations) {
  auto d = error_of("PUBLICATIONS WITH YEAR");
  EXPECT_EQ(d.code, DiagnosticCode::syntax_error);
  EXPECT_EQ(d.span, (Span{22, 22}));
  EXPECT_EQ(d.expected, (std::vector<std::string>{"AT LEAST", "AT MOST", "LESS THAN", "MORE THAN", "NUMBER"}));

  d = error_of(R"(PERSONS NAMED "x" )))");
  EXPECT_EQ(d.span, (Span{18, 19}));
  EXPECT_NE(d.message.find("unexpected ')'"), std::string::npos);

  d = error_of("COUNT PERSONS");
  EXPECT_EQ(d.span, (Span{6, 13}));
  EXPECT_EQ(d.expected, (std::vector<std::string>{"("}));
  EXPECT_EQ(error_of("").message, "unexpected end of query, expected CONFERENCE, CONFERENCES, INSTITUTION, "
                                  "INSTITUTIONS, JOURNAL, JOURNALS, KEYWORD, KEYWORDS, PERSON, PERSONS, PUBLICATION, "
                                  "PUBLICATIONS, NUMBER, ~, ALTERNATIVE NAMES FOR, COAUTHORS OF, CORE RANKS FOR, COUNT, "
                                  "MOST CITED, MOST FREQUENT, MOST FREQUENT KEYWORD OF, MOST FREQUENT KEYWORDS OF, "
                                  "MOST PUBLISHING, MOST RESEARCHING, NEWEST, OLDEST, RELATED KEYWORD TO, "
                                  "RELATED KEYWORDS TO or [");
}

// Deleting one token of a valid query either leaves a query or yields a
// syntax error; nothing else escapes.
TEST(Parser, SingleTokenDeletions) {
  int rejected = 0;
  for (const auto& q : sample_queries()) {
    auto tokens = tokenize(q);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string mutant = q.substr(0, tokens[i].span.start) + q.substr(tokens[i].span.end);
      try {
        parse(mutant);
      } catch (const QueryError& e) {
        EXPECT_EQ(e.diagnostic().code, DiagnosticCode::syntax_error) << mutant;
        ++rejected;
      }
    }
  }
  EXPECT_GT(rejected, 200);
}

TEST(Parser, DeeplyNestedQuery) {
  std::string q = "PERSONS";
  for (int i = 0; i < 40; ++i) q = "COAUTHORS OF (" + q + ")";
  EXPECT_NO_THROW(parse(q));
  EXPECT_EQ(render(parse(q)), q);
}

}  // namespace
}  // namespace schenql::testing
