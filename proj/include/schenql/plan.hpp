#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schenql/ast.hpp"
#include "schenql/corpus.hpp"
#include "schenql/diagnostic.hpp"
#include "schenql/text_match.hpp"

namespace schenql {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t {
  scan,
  constant,
  predicate,
  set_op,
  aggregate,
  truncate,
  project,
  count,
  function,
};

enum class ResultKind : std::uint8_t { entities, scalar, table };

enum class SetOpKind : std::uint8_t { and_, or_, and_not, or_not };

/// Per-entity tests. inputs[0] is the candidate set, further inputs are the
/// entity-set arguments.
enum class PredicateKind : std::uint8_t {
  member_of,         // candidate in inputs[1]
  attribute_equals,  // field == text
  year_compare,
  about_keyword,
  about_terms,
  hosts,             // venue hosts a publication of inputs[1]
  keyword_of,        // keyword attached to a publication associated with inputs[1]
  appeared_in,
  cited_by,
  references,
  edited_by,
  written_by,
  written_by_any,    // inputs[1..]: the person sets
  published_with,
  authored,
  authored_only,
  authored_no,
  edited,
  works_for,
  published_in,
  with_members,
  coauthor_of,
  metric_compare,
  length_compare,
  count_compare,     // relation count, scoped by inputs[1] when `scoped`
};

enum class Field : std::uint8_t { dblp_key, doi, isbn, volume, orcid, acronym, city, country };

enum class Relation : std::uint8_t { references, citations, coauthors };

/// Scoring keys. inputs[0] is the candidate set.
enum class AggregateKind : std::uint8_t {
  relation_count,     // inputs[1] optional scope
  year,
  publishing_in,      // inputs[1] venues
  researching_about,  // inputs[1] keywords
  keyword_frequency,  // inputs[1] source entities
  related_keywords,   // inputs[1] seeds, inputs[2] optional scope
  metric,
  length,
};

enum class FunctionNodeKind : std::uint8_t { core_ranks, alternative_names, most_frequent };

struct PlanNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::scan;
  ResultKind result = ResultKind::entities;
  /// Concept of entity results.
  Concept entity_concept = Concept::publication;
  std::vector<NodeId> inputs;

  // scan
  Specialisation specialisation = Specialisation::none;
  // constant
  IndexList ids;
  std::string label;
  // predicate / aggregate / set_op / function
  PredicateKind predicate = PredicateKind::member_of;
  AggregateKind aggregate = AggregateKind::relation_count;
  SetOpKind set_op = SetOpKind::or_;
  FunctionNodeKind function = FunctionNodeKind::core_ranks;

  Field field = Field::dblp_key;
  Relation relation = Relation::references;
  Comparator comparator = Comparator::eq;
  std::int64_t number = 0;
  std::string text;
  std::optional<TermExpr> terms;
  Metric metric = Metric::core_rank;
  TextAttribute attribute = TextAttribute::name;
  Direction direction = Direction::descending;
  bool distinct = false;
  bool scoped = false;
  /// Candidates with a score below this are dropped before ranking.
  std::int64_t min_score = 0;
  /// Competition-rank cut; absent keeps the full ranked list.
  std::optional<std::uint64_t> rank;
  // truncate
  std::uint64_t limit = 0;
  // project / most_frequent
  std::vector<std::string> attributes;
};

struct LogicalPlan {
  std::vector<PlanNode> nodes;
  NodeId output = 0;
  /// Resolution warnings collected while lowering.
  std::vector<Diagnostic> warnings;

  const PlanNode& node(NodeId id) const { return nodes.at(id); }
  const PlanNode& output_node() const { return nodes.at(output); }
};

std::string_view node_kind_name(NodeKind k);
std::string_view result_kind_name(ResultKind k);
std::string_view set_op_name(SetOpKind k);
std::string_view predicate_kind_name(PredicateKind k);
std::string_view field_name(Field f);
std::string_view relation_name(Relation r);
std::string_view aggregate_kind_name(AggregateKind k);
std::string_view function_node_kind_name(FunctionNodeKind k);
std::string_view comparator_name(Comparator c);
std::string_view metric_name(Metric m);
std::string_view text_attribute_name(TextAttribute a);
std::string_view specialisation_name(Specialisation s);

/// Attribute names usable in projections and MOST FREQUENT for a concept.
const std::vector<std::string>& attributes_for(Concept c);

bool compare(std::int64_t value, Comparator c, std::int64_t bound);

/// Lowers a parsed query. Throws QueryError (semantic_error) for rank
/// restrictions without aggregation, invalid attributes, bad metric values
/// and limits of zero. Unresolved literals become empty constants plus a
/// warning.
LogicalPlan lower(const Query& query, const Corpus& corpus);

/// Structural checks; an empty result means the plan satisfies all invariants.
std::vector<Diagnostic> validate(const LogicalPlan& plan);

/// One line per node: `nID kind args <- inputs`, then `output nID kind`.
std::string to_debug_string(const LogicalPlan& plan);

}  // namespace schenql
