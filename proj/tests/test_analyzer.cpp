#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "schenql/evaluator.hpp"
#include "schenql/parser.hpp"
#include "schenql/plan.hpp"

namespace schenql::testing {
namespace {

LogicalPlan plan_of(const std::string& q) { return lower(parse(q), mini()); }

Diagnostic semantic_failure(const std::string& q) {
  try {
    plan_of(q);
  } catch (const QueryError& e) {
    return e.diagnostic();
  }
  ADD_FAILURE() << "lowered without error: " << q;
  return {};
}

TEST(Analyzer, RankNeedsAggregation) {
  for (const char* q : {"~3 PERSONS", R"(~2 COAUTHORS OF "Adam Jatowt")", "~1 COUNT (PERSONS)",
                        R"(~2 PUBLICATIONS WRITTEN BY "Wei Wang")", R"(~1 CORE RANKS FOR "Adam Jatowt")",
                        R"(~1 ALTERNATIVE NAMES FOR "Christine Betts")"}) {
    auto d = semantic_failure(q);
    EXPECT_EQ(d.code, DiagnosticCode::semantic_error) << q;
    EXPECT_NE(d.message.find("needs an aggregation"), std::string::npos) << q << ": " << d.message;
    ASSERT_TRUE(d.span) << q;
  }
  // Aggregations take it.
  EXPECT_NO_THROW(plan_of(R"(~3 MOST CITED (PUBLICATIONS))"));
  EXPECT_NO_THROW(plan_of("PERSONS WITH ~2 LONGEST NAME"));
}

TEST(Analyzer, OtherSemanticErrors) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"0 PERSONS", "at least 1"},
      {"~0 MOST CITED (PUBLICATIONS)", "at least 1"},
      {"3 COUNT (PERSONS)", "COUNT takes no limit"},
      {R"(2 CORE RANKS FOR "Adam Jatowt")", "CORE RANKS FOR takes no limit"},
      {R"(MOST FREQUENT "colour" OF (PERSONS))", "not an attribute"},
      {R"(["title"] OF (PERSONS))", "not an attribute"},
      {R"(PERSONS WITH H-AVG METRIC "A*")", "compares with a number"},
      {R"(PUBLICATIONS WITH CORERANK METRIC "Z")", "unknown CORE rank"},
      {R"(PUBLICATIONS WRITTEN BY ANY 0 OF [(PERSONS)])", "ANY needs"},
      {R"(PUBLICATIONS ABOUT TERMS "a:")", "invalid TERMS"},
      {R"(PUBLICATIONS ABOUT TERMS "(a|b")", "invalid TERMS"},
      {R"(MOST FREQUENT "year" OF (COUNT (PUBLICATIONS)))", "returning entities"},
  };
  for (const auto& [q, fragment] : cases) {
    auto d = semantic_failure(q);
    EXPECT_EQ(d.code, DiagnosticCode::semantic_error) << q;
    EXPECT_NE(d.message.find(fragment), std::string::npos) << q << ": " << d.message;
  }
}

TEST(Analyzer, UnresolvedLiteralWarns) {
  auto p = plan_of(R"(PUBLICATIONS WRITTEN BY "No Such Person")");
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.warnings[0].code, DiagnosticCode::resolution_warning);
  EXPECT_FALSE(p.warnings[0].is_error());
  EXPECT_NE(p.warnings[0].message.find("No Such Person"), std::string::npos);
  EXPECT_TRUE(evaluate(p, mini()).ids.empty());
  EXPECT_TRUE(plan_of(R"(PUBLICATIONS WRITTEN BY "Adam Jatowt")").warnings.empty());
}

TEST(Analyzer, LoweredPlansValidate) {
  for (const auto& q : sample_queries()) {
    auto p = plan_of(q);
    auto problems = validate(p);
    EXPECT_TRUE(problems.empty()) << q << "\n" << to_debug_string(p);
    // Inputs come before their users.
    for (const auto& n : p.nodes) {
      for (auto in : n.inputs) EXPECT_LT(in, n.id) << q;
    }
  }
}

TEST(Analyzer, DebugString) {
  auto p = plan_of(R"(2 ~2 MOST RESEARCHING (PERSONS) ABOUT KEYWORD "digital libraries")");
  EXPECT_EQ(to_debug_string(p),
            "n0 scan person\n"
            "n1 constant keyword size=1 label=\"digital libraries\"\n"
            "n2 aggregate researching_about person dir=desc min=1 rank=2 <- n0 n1\n"
            "n3 truncate limit=2 <- n2\n"
            "output n3 entities person\n");
}

PlanNode node(NodeId id, NodeKind kind, Concept c, std::vector<NodeId> inputs = {}) {
  PlanNode n;
  n.id = id;
  n.kind = kind;
  n.entity_concept = c;
  n.inputs = std::move(inputs);
  return n;
}

TEST(Analyzer, ValidateRejectsMixedSetOp) {
  LogicalPlan p;
  p.nodes.push_back(node(0, NodeKind::scan, Concept::person));
  p.nodes.push_back(node(1, NodeKind::scan, Concept::publication));
  p.nodes.push_back(node(2, NodeKind::set_op, Concept::person, {0, 1}));
  p.output = 2;
  auto problems = validate(p);
  ASSERT_FALSE(problems.empty());
  EXPECT_EQ(problems[0].code, DiagnosticCode::plan_error);
  EXPECT_EQ(problems[0].node, 2u);
  EXPECT_THROW(evaluate(p, mini()), QueryError);
}

TEST(Analyzer, ValidateRejectsCycle) {
  LogicalPlan p;
  p.nodes.push_back(node(0, NodeKind::set_op, Concept::person, {1, 2}));
  p.nodes.push_back(node(1, NodeKind::set_op, Concept::person, {0, 2}));
  p.nodes.push_back(node(2, NodeKind::scan, Concept::person));
  p.output = 0;
  auto problems = validate(p);
  bool cycle = std::any_of(problems.begin(), problems.end(),
                           [](const Diagnostic& d) { return d.message.find("cycle") != std::string::npos; });
  EXPECT_TRUE(cycle) << ::testing::PrintToString(problems.size());
  EXPECT_THROW(evaluate(p, mini()), QueryError);
}

TEST(Analyzer, ValidateRejectsBadShapes) {
  LogicalPlan empty;
  EXPECT_FALSE(validate(empty).empty());

  LogicalPlan dangling;
  dangling.nodes.push_back(node(0, NodeKind::truncate, Concept::person, {5}));
  EXPECT_FALSE(validate(dangling).empty());

  // A limit over a scalar.
  LogicalPlan count;
  count.nodes.push_back(node(0, NodeKind::scan, Concept::person));
  count.nodes.push_back(node(1, NodeKind::count, Concept::person, {0}));
  count.nodes[1].result = ResultKind::scalar;
  count.nodes.push_back(node(2, NodeKind::truncate, Concept::person, {1}));
  count.nodes[2].result = ResultKind::scalar;
  count.nodes[2].limit = 1;
  count.output = 2;
  EXPECT_FALSE(validate(count).empty());
}

}  // namespace
}  // namespace schenql::testing
