// Expected results over fixtures/mini were derived by hand and with a
// separate script over the raw JSONL files, then frozen here.

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "schenql/evaluator.hpp"
#include "schenql/metrics.hpp"
#include "schenql/parser.hpp"
#include "schenql/plan.hpp"

namespace schenql::testing {
namespace {

struct Run {
  LogicalPlan plan;
  ResultSet result;
};

Run run(const std::string& q) {
  Run r;
  r.plan = lower(parse(q), mini());
  r.result = evaluate(r.plan, mini());
  // The two evaluators agree on every query in this file.
  EXPECT_EQ(r.result, oracle_evaluate(r.plan, mini())) << q << "\n" << describe(r.result, mini());
  return r;
}

std::vector<std::string> keys(const std::string& q) {
  auto r = run(q).result;
  EXPECT_EQ(r.kind, ResultKind::entities) << q;
  std::vector<std::string> out;
  for (auto id : r.ids) out.emplace_back(mini().key_of(r.entity_concept, id));
  return out;
}

std::int64_t scalar(const std::string& q) {
  auto r = run(q).result;
  EXPECT_EQ(r.kind, ResultKind::scalar) << q;
  return r.scalar;
}

Table table(const std::string& q) {
  auto r = run(q).result;
  EXPECT_EQ(r.kind, ResultKind::table) << q;
  return r.table;
}

using Keys = std::vector<std::string>;

const std::string betts = "homepages/b/ChristineBetts";
const std::string jatowt = "homepages/j/AdamJatowt";
const std::string lee = "homepages/l/WangWeiLee";
const std::string wang = "homepages/w/WeiWang";
const std::string wang42 = "homepages/w/WeiWang0042";

TEST(Evaluator, NameModes) {
  EXPECT_EQ(keys(R"(PERSONS NAMED ="Wei Wang")"), (Keys{wang}));
  EXPECT_EQ(keys(R"(PERSONS NAMED "Wei Wang")"), (Keys{wang, wang42}));
  auto fuzzy = keys(R"(PERSONS NAMED ~"wang wei")");
  EXPECT_NE(std::find(fuzzy.begin(), fuzzy.end(), lee), fuzzy.end());
  EXPECT_EQ(keys(R"(PERSON NAMED "Christine Betts")"), (Keys{betts}));
  // Aliases resolve too.
  EXPECT_EQ(keys(R"(PERSONS NAMED "C. Betts")"), (Keys{betts}));
}

TEST(Evaluator, Coauthors) {
  EXPECT_EQ(keys(R"(COAUTHORS OF "Adam Jatowt")"), (Keys{betts, wang, wang42}));
  EXPECT_EQ(keys("PERSONS WITH MOST COAUTHORS"), (Keys{jatowt}));
  EXPECT_EQ(keys("PERSONS WITH AT LEAST 2 COAUTHORS"), (Keys{jatowt, wang, wang42}));
}

TEST(Evaluator, PublicationFilters) {
  EXPECT_EQ(keys("PUBLICATIONS WITH YEAR 2020 WITH AT LEAST 20 CITATIONS"), (Keys{"journals/jodl/WangJ20"}));
  EXPECT_EQ(keys("PUBLICATIONS WITH MORE THAN 5 CITATIONS"),
            (Keys{"conf/jcdl/BettsJ18", "journals/jodl/Wang21", "journals/jodl/WangJ20"}));
  EXPECT_EQ(keys(R"(PUBLICATIONS ABOUT TERMS "digital:libraries|dsql")"),
            (Keys{"books/sp/BettsJ22", "conf/jcdl/BettsJ18", "conf/jcdl/WangJ05", "journals/jodl/Wang98"}));
  EXPECT_EQ(keys("PUBLICATIONS WITH TITLE LENGTH AT MOST 30"), (Keys{"journals/jodl/Wang98"}));
  EXPECT_EQ(keys(R"(PUBLICATIONS EDITED BY "Wei Wang")"), (Keys{"books/sp/BettsJ22"}));
  EXPECT_EQ(scalar(R"(COUNT (PUBLICATIONS TITLED ~"practice"))"), 18);
  EXPECT_EQ(scalar(R"(COUNT (PUBLICATIONS APPEARED IN "JODL"))"), 3);
  EXPECT_EQ(scalar(R"(COUNT (PUBLICATIONS PUBLISHED WITH "Trier University"))"), 10);
  EXPECT_EQ(scalar(R"(COUNT (PUBLICATIONS PUBLISHED WITH "UniPi"))"), 23);
}

TEST(Evaluator, WrittenByAnyDistinct) {
  // Authors from both institutions; WangJ20 has two Pisa authors only.
  auto got = keys(
      R"(PUBLICATIONS WRITTEN BY ANY DISTINCT 2 OF [(PERSON WORKS FOR "University of Pisa"), (PERSON WORKS FOR "Trier University")])");
  EXPECT_EQ(got.size(), 9u);
  EXPECT_EQ(std::find(got.begin(), got.end(), "journals/jodl/WangJ20"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "conf/jcdl/WangJ05"), got.end());
  // Without DISTINCT two Pisa authors are enough.
  auto loose = keys(
      R"(PUBLICATIONS WRITTEN BY ANY 2 OF [(PERSON WORKS FOR "University of Pisa"), (PERSON WORKS FOR "Trier University")])");
  EXPECT_NE(std::find(loose.begin(), loose.end(), "journals/jodl/WangJ20"), loose.end());
}

TEST(Evaluator, PersonRelations) {
  EXPECT_EQ(keys(R"(PERSONS WORKS FOR "Trier University")"), (Keys{betts, wang}));
  EXPECT_EQ(keys(R"(PERSONS EDITED "books/sp/BettsJ22")"), (Keys{wang}));
  EXPECT_EQ(keys(R"(PERSONS PUBLISHED IN "JODL")"), (Keys{jatowt, wang, wang42}));
  EXPECT_EQ(keys("PERSONS AUTHORED NO (PUBLICATIONS WITH YEAR AT LEAST 2020)"), (Keys{lee}));
  // ONLY needs at least one publication.
  EXPECT_EQ(keys("PERSONS AUTHORED ONLY (PUBLICATIONS WITH YEAR AT LEAST 2018)"), (Keys{betts, wang42}));
  EXPECT_EQ(keys(R"(PERSONS WORKS FOR "UniPi" OR NOT AUTHORED (PUBLICATIONS))"), (Keys{jatowt, lee, wang42}));
  EXPECT_EQ(keys(R"(INSTITUTIONS WITH MEMBERS (PERSONS AUTHORED "conf/jcdl/BettsJ18"))"),
            (Keys{"inst/pisa", "inst/trier"}));
}

TEST(Evaluator, Venues) {
  EXPECT_EQ(keys(R"(CONFERENCES OF "conf/jcdl/WangJ05")"), (Keys{"conf/jcdl"}));
  EXPECT_TRUE(keys(R"(JOURNALS OF "conf/jcdl/WangJ05")").empty());
  EXPECT_EQ(keys(R"(JOURNALS WITH VOLUME "21")"), (Keys{"journals/jodl"}));
  EXPECT_EQ(keys("INSTITUTIONS WITH LOCATION LENGTH 8"), (Keys{"inst/pisa"}));
}

TEST(Evaluator, Keywords) {
  EXPECT_EQ(keys(R"(KEYWORDS OF (PUBLICATIONS CITED BY (PUBLICATIONS ABOUT KEYWORD "dsql")))"),
            (Keys{"citation analysis", "digital libraries", "dsql", "metadata", "search"}));
  // Full ranked list unless restricted.
  EXPECT_EQ(keys(R"(RELATED KEYWORDS TO "digital libraries")"),
            (Keys{"dsql", "metadata", "query languages", "search"}));
  EXPECT_EQ(keys(R"(~1 RELATED KEYWORDS TO "digital libraries")"), (Keys{"dsql"}));
  EXPECT_EQ(keys(R"(~3 MOST FREQUENT KEYWORDS OF (PUBLICATIONS WRITTEN BY "Adam Jatowt"))"),
            (Keys{"digital libraries", "dsql", "search"}));
  EXPECT_EQ(keys("~3 MOST FREQUENT KEYWORDS OF (KEYWORDS)"),
            (Keys{"citation analysis", "bibliometrics", "digital libraries"}));
}

TEST(Evaluator, Rankings) {
  EXPECT_EQ(keys(R"(MOST RESEARCHING (PERSONS) ABOUT KEYWORD "digital libraries")"), (Keys{jatowt}));
  // Competition ranking keeps the whole tie at rank 2.
  EXPECT_EQ(keys(R"(~2 MOST RESEARCHING (PERSONS) ABOUT KEYWORD "digital libraries")"),
            (Keys{jatowt, betts, wang}));
  EXPECT_EQ(keys(R"(2 ~2 MOST RESEARCHING (PERSONS) ABOUT KEYWORD "digital libraries")"), (Keys{jatowt, betts}));
  EXPECT_EQ(keys(R"(~5 MOST RESEARCHING (PERSONS) ABOUT KEYWORD "citation analysis")"), (Keys{wang42, jatowt}));
  EXPECT_EQ(keys(R"(MOST PUBLISHING (PERSONS) IN "JCDL")"), (Keys{jatowt}));
  EXPECT_EQ(keys(R"(MOST CITED (PUBLICATION APPEARED IN "JODL"))"), (Keys{"journals/jodl/WangJ20"}));
  EXPECT_EQ(keys("PUBLICATIONS WITH MOST REFERENCES"),
            (Keys{"journals/corr/abs-2100", "journals/corr/abs-2310", "journals/jodl/WangJ20"}));
  EXPECT_EQ(keys(R"(NEWEST (PUBLICATIONS WRITTEN BY "Adam Jatowt"))"), (Keys{"books/sp/BettsJ22"}));
  EXPECT_EQ(keys("OLDEST (PUBLICATIONS)"), (Keys{"journals/jodl/Wang98"}));
  EXPECT_EQ(keys("PERSONS WITH ~5 LONGEST NAME"), (Keys{betts, wang42, lee, jatowt, wang}));
}

TEST(Evaluator, Metrics) {
  EXPECT_EQ(keys("PERSONS WITH HIGHEST H-AVG METRIC"), (Keys{jatowt}));
  EXPECT_EQ(keys("PERSONS WITH ~2 HIGHEST H-AVG METRIC"), (Keys{jatowt, betts}));
  EXPECT_EQ(keys("PERSONS WITH LOWEST H-AVG METRIC"), (Keys{lee}));
  EXPECT_EQ(keys("INSTITUTIONS WITH HIGHEST H-AVG METRIC"), (Keys{"inst/pisa"}));
  EXPECT_TRUE(keys("INSTITUTIONS WITH H-AVG METRIC AT LEAST 1").empty());
  EXPECT_EQ(keys("INSTITUTIONS WITH H-AVG METRIC LESS THAN 1"), (Keys{"inst/pisa", "inst/trier"}));
  EXPECT_EQ(keys(R"(PERSONS WITH CORERANK METRIC "A*")"), (Keys{betts, jatowt, wang}));
  EXPECT_EQ(keys(R"(PUBLICATIONS WITH CORERANK METRIC AT LEAST "A")"),
            (Keys{"conf/jcdl/BettsJ18", "conf/jcdl/WangJ05"}));
}

TEST(Evaluator, Functions) {
  EXPECT_EQ(scalar("COUNT (PERSONS)"), 5);
  // Tables count rows, scalars count once.
  EXPECT_EQ(scalar(R"(COUNT (ALTERNATIVE NAMES FOR "Christine Betts"))"), 2);
  EXPECT_EQ(scalar("COUNT (COUNT (PERSONS))"), 1);
  EXPECT_EQ(table(R"(CORE RANKS FOR "Adam Jatowt")"),
            (Table{{"core_rank", "count"}, {{Cell("A*"), Cell(std::int64_t{2})}}}));
  EXPECT_EQ(table(R"(ALTERNATIVE NAMES FOR "Christine Betts")"),
            (Table{{"dblp_key", "alternative_name"}, {{Cell(betts), Cell("C. Betts")}, {Cell(betts), Cell("Christine A. Betts")}}}));
  EXPECT_EQ(table(R"(MOST FREQUENT "year" OF (PUBLICATIONS))"),
            (Table{{"year", "count"},
                   {{Cell(std::int64_t{2021}), Cell(std::int64_t{6})}, {Cell(std::int64_t{2022}), Cell(std::int64_t{6})}}}));
  EXPECT_EQ(table(R"(["name", "orcid"] OF (PERSONS WORKS FOR "UniPi"))"),
            (Table{{"name", "orcid"},
                   {{Cell("Adam Jatowt"), Cell("")}, {Cell("Wei Wang 0042"), Cell("0000-0001-0042-0042")}}}));
}

TEST(Evaluator, UnresolvedLiteralIsEmptyWithWarning) {
  auto r = run(R"(PUBLICATIONS CITED BY "conf/aaai/ChangRRR08")");
  EXPECT_TRUE(r.result.ids.empty());
  ASSERT_EQ(r.plan.warnings.size(), 1u);
  EXPECT_EQ(r.plan.warnings[0].code, DiagnosticCode::resolution_warning);
}

TEST(Evaluator, TableQueriesRun) {
  for (const auto& q : sample_queries()) {
    auto plan = lower(parse(q), mini());
    EXPECT_TRUE(validate(plan).empty()) << q;
    auto r = evaluate(plan, mini());
    EXPECT_EQ(r, oracle_evaluate(plan, mini())) << q;
  }
}

TEST(Evaluator, MetricComparisons) {
  // H-AVG per person, checked through the comparison filters.
  EXPECT_EQ(keys("PERSONS WITH H-AVG METRIC AT LEAST 1"), Keys{});
  EXPECT_EQ(keys("PERSONS WITH H-AVG METRIC 0"), (Keys{lee}));
  EXPECT_EQ(keys("PERSONS WITH H-AVG METRIC MORE THAN 0 WITH H-AVG METRIC LESS THAN 1"),
            (Keys{betts, jatowt, wang, wang42}));
}

}  // namespace
}  // namespace schenql::testing
