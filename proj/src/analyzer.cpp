#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "schenql/parser.hpp"
#include "schenql/plan.hpp"

namespace schenql {

std::string_view node_kind_name(NodeKind k) {
  static constexpr std::array<std::string_view, 9> names = {
      "scan", "constant", "predicate", "set_op", "aggregate", "truncate", "project", "count", "function"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view result_kind_name(ResultKind k) {
  static constexpr std::array<std::string_view, 3> names = {"entities", "scalar", "table"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view set_op_name(SetOpKind k) {
  static constexpr std::array<std::string_view, 4> names = {"and", "or", "and_not", "or_not"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view predicate_kind_name(PredicateKind k) {
  static constexpr std::array<std::string_view, 25> names = {
      "member_of",   "attribute_equals", "year_compare",   "about_keyword", "about_terms",
      "hosts",       "keyword_of",       "appeared_in",    "cited_by",      "references",
      "edited_by",   "written_by",       "written_by_any", "published_with", "authored",
      "authored_only", "authored_no",    "edited",         "works_for",     "published_in",
      "with_members", "coauthor_of",     "metric_compare", "length_compare", "count_compare"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view field_name(Field f) {
  static constexpr std::array<std::string_view, 8> names = {"dblp_key", "doi",     "isbn", "volume",
                                                            "orcid",    "acronym", "city", "country"};
  return names[static_cast<std::size_t>(f)];
}

std::string_view relation_name(Relation r) {
  static constexpr std::array<std::string_view, 3> names = {"references", "citations", "coauthors"};
  return names[static_cast<std::size_t>(r)];
}

std::string_view aggregate_kind_name(AggregateKind k) {
  static constexpr std::array<std::string_view, 8> names = {
      "relation_count",    "year",             "publishing_in", "researching_about",
      "keyword_frequency", "related_keywords", "metric",        "length"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view function_node_kind_name(FunctionNodeKind k) {
  static constexpr std::array<std::string_view, 3> names = {"core_ranks", "alternative_names", "most_frequent"};
  return names[static_cast<std::size_t>(k)];
}

std::string_view comparator_name(Comparator c) {
  static constexpr std::array<std::string_view, 5> names = {"eq", "at_least", "at_most", "more_than",
                                                            "less_than"};
  return names[static_cast<std::size_t>(c)];
}

std::string_view metric_name(Metric m) { return m == Metric::core_rank ? "core_rank" : "h_avg"; }

std::string_view text_attribute_name(TextAttribute a) {
  static constexpr std::array<std::string_view, 5> names = {"name", "acronym", "title", "abstract", "location"};
  return names[static_cast<std::size_t>(a)];
}

std::string_view specialisation_name(Specialisation s) {
  static constexpr std::array<std::string_view, 10> names = {
      "none",         "book",          "article",    "phdthesis", "masterthesis",
      "inproceeding", "incollection", "proceeding", "author",    "editor"};
  return names[static_cast<std::size_t>(s)];
}

const std::vector<std::string>& attributes_for(Concept c) {
  static const std::vector<std::string> venue = {"name", "acronym", "dblp_key"};
  static const std::vector<std::string> keyword = {"name"};
  static const std::vector<std::string> publication = {"title", "abstract", "year",  "doi",
                                                       "isbn",  "dblp_key", "volume"};
  static const std::vector<std::string> person = {"name", "orcid", "dblp_key"};
  static const std::vector<std::string> institution = {"name", "city", "country", "dblp_key"};
  switch (c) {
    case Concept::conference:
    case Concept::journal: return venue;
    case Concept::keyword: return keyword;
    case Concept::publication: return publication;
    case Concept::person: return person;
    case Concept::institution: return institution;
  }
  return keyword;
}

bool compare(std::int64_t value, Comparator c, std::int64_t bound) {
  switch (c) {
    case Comparator::eq: return value == bound;
    case Comparator::at_least: return value >= bound;
    case Comparator::at_most: return value <= bound;
    case Comparator::more_than: return value > bound;
    case Comparator::less_than: return value < bound;
  }
  return false;
}

namespace {

bool is_one_of(Concept c, std::initializer_list<Concept> allowed) {
  return std::find(allowed.begin(), allowed.end(), c) != allowed.end();
}

bool text_attribute_legal(TextAttribute a, Concept c) {
  switch (a) {
    case TextAttribute::name:
      return is_one_of(c, {Concept::conference, Concept::journal, Concept::person, Concept::institution});
    case TextAttribute::acronym: return is_one_of(c, {Concept::conference, Concept::journal});
    case TextAttribute::title:
    case TextAttribute::abstract_text: return c == Concept::publication;
    case TextAttribute::location: return c == Concept::institution;
  }
  return false;
}

bool field_legal(Field f, Concept c) {
  switch (f) {
    case Field::dblp_key: return c != Concept::keyword;
    case Field::doi:
    case Field::isbn: return c == Concept::publication;
    case Field::volume: return is_one_of(c, {Concept::publication, Concept::journal});
    case Field::orcid: return c == Concept::person;
    case Field::acronym: return is_one_of(c, {Concept::conference, Concept::journal});
    case Field::city:
    case Field::country: return c == Concept::institution;
  }
  return false;
}

std::string plural(Concept c) {
  switch (c) {
    case Concept::conference: return "conferences";
    case Concept::journal: return "journals";
    case Concept::keyword: return "keywords";
    case Concept::publication: return "publications";
    case Concept::person: return "persons";
    case Concept::institution: return "institutions";
  }
  return "";
}

[[noreturn]] void semantic_error(std::string message, const SourceSpan& span) {
  Diagnostic d;
  d.code = DiagnosticCode::semantic_error;
  d.message = std::move(message);
  d.span = span.span;
  throw QueryError(std::move(d));
}

std::string literal_label(const Literal& lit) {
  std::string out;
  if (lit.mode == NameMatchMode::fuzzy) out += "~";
  if (lit.mode == NameMatchMode::strict) out += "=";
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"' || ch == '\\') q += '\\';
      q += ch;
    }
    return q + "\"";
  };
  if (lit.bracketed) {
    out += "[";
    for (std::size_t i = 0; i < lit.values.size(); ++i) {
      if (i > 0) out += ", ";
      out += quoted(lit.values[i]);
    }
    return out + "]";
  }
  return out + (lit.values.empty() ? std::string("\"\"") : quoted(lit.values.front()));
}

class Lowerer {
 public:
  explicit Lowerer(const Corpus& corpus) : corpus_(corpus) {}

  LogicalPlan run(const Query& q) {
    plan_.output = lower_query(q);
    return std::move(plan_);
  }

 private:
  NodeId add(PlanNode n) {
    n.id = static_cast<NodeId>(plan_.nodes.size());
    plan_.nodes.push_back(std::move(n));
    return plan_.nodes.back().id;
  }

  const PlanNode& at(NodeId id) const { return plan_.nodes[id]; }

  NodeId scan(Concept c, Specialisation s = Specialisation::none) {
    PlanNode n;
    n.kind = NodeKind::scan;
    n.entity_concept = c;
    n.specialisation = s;
    return add(std::move(n));
  }

  static std::uint64_t checked_restriction(std::uint64_t n, const SourceSpan& span) {
    if (n == 0) semantic_error("restriction must be at least 1", span);
    return n;
  }

  static std::int64_t checked_number(std::uint64_t n, const SourceSpan& span) {
    if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      semantic_error("number out of range", span);
    }
    return static_cast<std::int64_t>(n);
  }

  NodeId truncate(NodeId input, std::uint64_t limit) {
    PlanNode n;
    n.kind = NodeKind::truncate;
    n.result = at(input).result;
    n.entity_concept = at(input).entity_concept;
    n.inputs = {input};
    n.limit = limit;
    return add(std::move(n));
  }

  NodeId lower_query(const Query& q) {
    if (q.limit) checked_restriction(*q.limit, q.span);
    if (q.rank) checked_restriction(*q.rank, q.span);
    if (const auto* e = std::get_if<EntityQuery>(&q.body)) {
      if (q.rank) semantic_error("rank restriction ~" + std::to_string(*q.rank) + " needs an aggregation", q.span);
      NodeId u = scan(e->base, e->specialisation);
      NodeId out = e->filter ? lower_filter(*e->filter, u, u) : u;
      return q.limit ? truncate(out, *q.limit) : out;
    }
    if (const auto* a = std::get_if<AggregationQuery>(&q.body)) return lower_aggregation(*a, q);
    return lower_function(std::get<FunctionQuery>(q.body), q);
  }

  NodeId lower_literal(const Literal& lit) {
    PlanNode n;
    n.kind = NodeKind::constant;
    n.label = literal_label(lit);
    n.entity_concept = lit.kinds.empty() ? Concept::publication : lit.kinds.front();
    for (Concept c : lit.kinds) {
      std::set<EntityIndex> ids;
      for (const auto& v : lit.values) {
        for (auto i : corpus_.resolve_literal(c, v, lit.mode)) ids.insert(i);
      }
      if (!ids.empty()) {
        n.entity_concept = c;
        n.ids.assign(ids.begin(), ids.end());
        break;
      }
    }
    if (n.ids.empty()) {
      Diagnostic d;
      d.code = DiagnosticCode::resolution_warning;
      std::string kinds;
      for (std::size_t i = 0; i < lit.kinds.size(); ++i) {
        if (i > 0) kinds += i + 1 == lit.kinds.size() ? " or " : ", ";
        kinds += plural(lit.kinds[i]);
      }
      d.message = "literal " + n.label + " matches no " + kinds;
      d.span = lit.span.span;
      d.node = static_cast<std::uint32_t>(plan_.nodes.size());
      plan_.warnings.push_back(std::move(d));
    }
    return add(std::move(n));
  }

  /// Lowers an argument that must produce entities.
  NodeId lower_ref(const EntityRef& r) {
    if (const auto* lit = std::get_if<Literal>(&r)) return lower_literal(*lit);
    const Query& q = *std::get<Box<Query>>(r);
    NodeId id = lower_query(q);
    if (at(id).result != ResultKind::entities) semantic_error("expected a query returning entities", q.span);
    return id;
  }

  static const SourceSpan& ref_span(const EntityRef& r) {
    if (const auto* lit = std::get_if<Literal>(&r)) return lit->span;
    return std::get<Box<Query>>(r)->span;
  }

  NodeId predicate(PredicateKind k, NodeId input, std::vector<NodeId> args = {}) {
    PlanNode n;
    n.kind = NodeKind::predicate;
    n.predicate = k;
    n.entity_concept = at(input).entity_concept;
    n.inputs = {input};
    n.inputs.insert(n.inputs.end(), args.begin(), args.end());
    return add(std::move(n));
  }

  NodeId set_op(SetOpKind k, std::vector<NodeId> inputs) {
    PlanNode n;
    n.kind = NodeKind::set_op;
    n.set_op = k;
    n.entity_concept = at(inputs.front()).entity_concept;
    n.inputs = std::move(inputs);
    return add(std::move(n));
  }

  /// `input` is the set the leaf applies to, `universe` the anchor scan.
  NodeId lower_filter(const FilterExpr& f, NodeId input, NodeId universe) {
    if (const auto* leaf = std::get_if<FilterLeaf>(&f)) return lower_leaf(*leaf, input);
    const auto& b = std::get<FilterBinary>(f);
    NodeId lhs = lower_filter(*b.lhs, input, universe);
    const FilterExpr& rhs = *b.rhs;
    switch (b.op) {
      case BoolOp::and_: return lower_filter(rhs, lhs, universe);
      case BoolOp::or_: return set_op(SetOpKind::or_, {lhs, lower_filter(rhs, universe, universe)});
      case BoolOp::and_not: return set_op(SetOpKind::and_not, {lhs, lower_filter(rhs, lhs, universe)});
      case BoolOp::or_not:
        return set_op(SetOpKind::or_not, {lhs, lower_filter(rhs, universe, universe), universe});
    }
    return lhs;
  }

  NodeId attribute(Field field, const FilterLeaf& f, NodeId input) {
    NodeId id = predicate(PredicateKind::attribute_equals, input);
    plan_.nodes[id].field = field;
    plan_.nodes[id].text = f.text;
    return id;
  }

  NodeId aggregate(AggregateKind k, NodeId candidates, std::vector<NodeId> args, Concept c) {
    PlanNode n;
    n.kind = NodeKind::aggregate;
    n.aggregate = k;
    n.entity_concept = c;
    n.inputs = {candidates};
    n.inputs.insert(n.inputs.end(), args.begin(), args.end());
    return add(std::move(n));
  }

  NodeId relation_aggregate(const FilterLeaf& f, Relation r, NodeId input) {
    std::vector<NodeId> args;
    for (const auto& a : f.args) args.push_back(lower_ref(a));
    NodeId id = aggregate(AggregateKind::relation_count, input, args, at(input).entity_concept);
    auto& n = plan_.nodes[id];
    n.relation = r;
    n.scoped = !args.empty();
    n.direction = f.direction;
    n.rank = checked_restriction(f.rank.value_or(1), f.span);
    return id;
  }

  NodeId count_compare(const FilterLeaf& f, Relation r, NodeId input) {
    std::vector<NodeId> args;
    for (const auto& a : f.args) args.push_back(lower_ref(a));
    NodeId id = predicate(PredicateKind::count_compare, input, args);
    auto& n = plan_.nodes[id];
    n.relation = r;
    n.scoped = !args.empty();
    n.comparator = f.comparator;
    n.number = checked_number(f.number, f.span);
    return id;
  }

  NodeId lower_leaf(const FilterLeaf& f, NodeId input) {
    const Concept c = at(input).entity_concept;
    auto with_ref = [&](PredicateKind k) { return predicate(k, input, {lower_ref(f.args.at(0))}); };
    switch (f.kind) {
      case FilterKind::with_dblpkey: return attribute(Field::dblp_key, f, input);
      case FilterKind::with_doi: return attribute(Field::doi, f, input);
      case FilterKind::with_isbn: return attribute(Field::isbn, f, input);
      case FilterKind::with_volume: return attribute(Field::volume, f, input);
      case FilterKind::with_orcid: return attribute(Field::orcid, f, input);
      case FilterKind::with_acronym: return attribute(Field::acronym, f, input);
      case FilterKind::with_city: return attribute(Field::city, f, input);
      case FilterKind::with_country: return attribute(Field::country, f, input);
      case FilterKind::named:
      case FilterKind::titled: {
        PlanNode k;
        k.kind = NodeKind::constant;
        k.entity_concept = c;
        k.ids = corpus_.match_names(c, f.text, f.mode);
        Literal lit;
        lit.mode = f.mode;
        lit.values = {f.text};
        k.label = literal_label(lit);
        NodeId names = add(std::move(k));
        return predicate(PredicateKind::member_of, input, {names});
      }
      case FilterKind::with_year: {
        NodeId id = predicate(PredicateKind::year_compare, input);
        plan_.nodes[id].comparator = f.comparator;
        plan_.nodes[id].number = checked_number(f.number, f.span);
        return id;
      }
      case FilterKind::about_keyword: return with_ref(PredicateKind::about_keyword);
      case FilterKind::about_terms: {
        TermExpr terms;
        try {
          terms = parse_terms(f.text);
        } catch (const TermSyntaxError& e) {
          semantic_error(std::string("invalid TERMS expression: ") + e.what(), f.span);
        }
        NodeId id = predicate(PredicateKind::about_terms, input);
        plan_.nodes[id].text = render_terms(terms);
        plan_.nodes[id].terms = std::move(terms);
        return id;
      }
      case FilterKind::of:
        return with_ref(c == Concept::keyword ? PredicateKind::keyword_of : PredicateKind::hosts);
      case FilterKind::appeared_in: return with_ref(PredicateKind::appeared_in);
      case FilterKind::cited_by: return with_ref(PredicateKind::cited_by);
      case FilterKind::references: return with_ref(PredicateKind::references);
      case FilterKind::edited_by: return with_ref(PredicateKind::edited_by);
      case FilterKind::written_by: return with_ref(PredicateKind::written_by);
      case FilterKind::written_by_any: {
        if (f.number == 0) semantic_error("ANY needs a count of at least 1", f.span);
        std::vector<NodeId> sets;
        for (const auto& a : f.args) sets.push_back(lower_ref(a));
        NodeId id = predicate(PredicateKind::written_by_any, input, sets);
        plan_.nodes[id].number = checked_number(f.number, f.span);
        plan_.nodes[id].distinct = f.distinct;
        return id;
      }
      case FilterKind::published_with: return with_ref(PredicateKind::published_with);
      case FilterKind::authored:
        switch (f.authored) {
          case AuthoredMode::any: return with_ref(PredicateKind::authored);
          case AuthoredMode::only: return with_ref(PredicateKind::authored_only);
          case AuthoredMode::no: return with_ref(PredicateKind::authored_no);
        }
        break;
      case FilterKind::edited: return with_ref(PredicateKind::edited);
      case FilterKind::works_for: return with_ref(PredicateKind::works_for);
      case FilterKind::published_in: return with_ref(PredicateKind::published_in);
      case FilterKind::with_members: return with_ref(PredicateKind::with_members);
      case FilterKind::most_references: return relation_aggregate(f, Relation::references, input);
      case FilterKind::most_citations: return relation_aggregate(f, Relation::citations, input);
      case FilterKind::most_coauthors: return relation_aggregate(f, Relation::coauthors, input);
      case FilterKind::extreme_metric: {
        NodeId id = aggregate(AggregateKind::metric, input, {}, c);
        plan_.nodes[id].metric = f.metric;
        plan_.nodes[id].direction = f.direction;
        plan_.nodes[id].rank = checked_restriction(f.rank.value_or(1), f.span);
        return id;
      }
      case FilterKind::extreme_length: {
        if (!text_attribute_legal(f.attribute, c)) {
          semantic_error(std::string(text_attribute_name(f.attribute)) + " is not an attribute of " + plural(c),
                         f.span);
        }
        NodeId id = aggregate(AggregateKind::length, input, {}, c);
        plan_.nodes[id].attribute = f.attribute;
        plan_.nodes[id].direction = f.direction;
        plan_.nodes[id].rank = checked_restriction(f.rank.value_or(1), f.span);
        return id;
      }
      case FilterKind::metric_compare: {
        std::int64_t value = 0;
        if (f.value_is_string) {
          if (f.metric == Metric::h_avg) semantic_error("H-AVG METRIC compares with a number", f.span);
          auto r = core_rank_from_name(f.text);
          if (!r) semantic_error("unknown CORE rank \"" + f.text + "\"", f.span);
          value = core_rank_ordinal(*r);
        } else {
          value = checked_number(f.number, f.span);
        }
        NodeId id = predicate(PredicateKind::metric_compare, input);
        plan_.nodes[id].metric = f.metric;
        plan_.nodes[id].comparator = f.comparator;
        plan_.nodes[id].number = value;
        return id;
      }
      case FilterKind::length_compare: {
        if (!text_attribute_legal(f.attribute, c)) {
          semantic_error(std::string(text_attribute_name(f.attribute)) + " is not an attribute of " + plural(c),
                         f.span);
        }
        NodeId id = predicate(PredicateKind::length_compare, input);
        plan_.nodes[id].attribute = f.attribute;
        plan_.nodes[id].comparator = f.comparator;
        plan_.nodes[id].number = checked_number(f.number, f.span);
        return id;
      }
      case FilterKind::count_references: return count_compare(f, Relation::references, input);
      case FilterKind::count_citations: return count_compare(f, Relation::citations, input);
      case FilterKind::count_coauthors: return count_compare(f, Relation::coauthors, input);
    }
    semantic_error("unsupported filter", f.span);
  }

  NodeId lower_aggregation(const AggregationQuery& a, const Query& q) {
    // Default: rank 1 with ties unless a LIMIT asks for the ranked list.
    std::optional<std::uint64_t> rank = q.rank;
    if (!rank && !q.limit) rank = 1;
    auto finish = [&](NodeId id) { return q.limit ? truncate(id, *q.limit) : id; };
    auto ranked = [&](AggregateKind k, NodeId candidates, std::vector<NodeId> args, Concept c, Direction d,
                      std::int64_t min_score) {
      NodeId id = aggregate(k, candidates, std::move(args), c);
      plan_.nodes[id].direction = d;
      plan_.nodes[id].rank = rank;
      plan_.nodes[id].min_score = min_score;
      return id;
    };
    switch (a.kind) {
      case AggregationKind::most_cited: {
        NodeId id = ranked(AggregateKind::relation_count, lower_ref(a.args.at(0)), {}, Concept::publication,
                           Direction::descending, 0);
        plan_.nodes[id].relation = Relation::citations;
        return finish(id);
      }
      case AggregationKind::newest:
        return finish(ranked(AggregateKind::year, lower_ref(a.args.at(0)), {}, Concept::publication,
                             Direction::descending, 0));
      case AggregationKind::oldest:
        return finish(ranked(AggregateKind::year, lower_ref(a.args.at(0)), {}, Concept::publication,
                             Direction::ascending, 0));
      case AggregationKind::coauthors_of: {
        if (q.rank) semantic_error("rank restriction ~" + std::to_string(*q.rank) + " needs an aggregation", q.span);
        NodeId persons = scan(Concept::person);
        return finish(predicate(PredicateKind::coauthor_of, persons, {lower_ref(a.args.at(0))}));
      }
      case AggregationKind::most_publishing_in: {
        NodeId persons = lower_ref(a.args.at(0));
        NodeId venues = lower_ref(a.args.at(1));
        return finish(ranked(AggregateKind::publishing_in, persons, {venues}, Concept::person,
                             Direction::descending, 1));
      }
      case AggregationKind::most_researching_about:
      case AggregationKind::most_researching_institution: {
        NodeId subjects = lower_ref(a.args.at(0));
        NodeId keywords = lower_ref(a.args.at(1));
        return finish(ranked(AggregateKind::researching_about, subjects, {keywords}, at(subjects).entity_concept,
                             Direction::descending, 1));
      }
      case AggregationKind::related_keywords_to: {
        NodeId seeds = lower_ref(a.args.at(0));
        std::vector<NodeId> args = {seeds};
        if (a.args.size() > 1) args.push_back(lower_ref(a.args[1]));
        NodeId id = aggregate(AggregateKind::related_keywords, scan(Concept::keyword), args, Concept::keyword);
        plan_.nodes[id].scoped = args.size() > 1;
        plan_.nodes[id].rank = q.rank;
        plan_.nodes[id].min_score = 1;
        return finish(id);
      }
      case AggregationKind::most_frequent_keywords_of: {
        NodeId source = lower_ref(a.args.at(0));
        return finish(ranked(AggregateKind::keyword_frequency, scan(Concept::keyword), {source}, Concept::keyword,
                             Direction::descending, 1));
      }
    }
    semantic_error("unsupported aggregation", q.span);
  }

  NodeId function_node(FunctionNodeKind k, std::vector<NodeId> inputs) {
    PlanNode n;
    n.kind = NodeKind::function;
    n.function = k;
    n.result = ResultKind::table;
    n.inputs = std::move(inputs);
    n.entity_concept = at(n.inputs.front()).entity_concept;
    return add(std::move(n));
  }

  void check_attribute(const std::string& attr, Concept c, const Query& q) {
    const auto& allowed = attributes_for(c);
    if (std::find(allowed.begin(), allowed.end(), attr) == allowed.end()) {
      semantic_error("\"" + attr + "\" is not an attribute of " + plural(c), q.span);
    }
  }

  NodeId lower_function(const FunctionQuery& f, const Query& q) {
    if (q.rank) semantic_error("rank restriction ~" + std::to_string(*q.rank) + " needs an aggregation", q.span);
    switch (f.kind) {
      case FunctionKind::count: {
        if (q.limit) semantic_error("COUNT takes no limit", q.span);
        NodeId input;
        if (const auto* nested = std::get_if<Box<Query>>(&f.args.at(0))) {
          input = lower_query(**nested);
        } else {
          input = lower_ref(f.args.at(0));
        }
        PlanNode n;
        n.kind = NodeKind::count;
        n.result = ResultKind::scalar;
        n.entity_concept = at(input).entity_concept;
        n.inputs = {input};
        return add(std::move(n));
      }
      case FunctionKind::core_ranks_for: {
        if (q.limit) semantic_error("CORE RANKS FOR takes no limit", q.span);
        std::vector<NodeId> inputs = {lower_ref(f.args.at(0))};
        if (f.args.size() > 1) inputs.push_back(lower_ref(f.args[1]));
        NodeId id = function_node(FunctionNodeKind::core_ranks, inputs);
        plan_.nodes[id].scoped = inputs.size() > 1;
        return id;
      }
      case FunctionKind::alternative_names_for: {
        NodeId id = function_node(FunctionNodeKind::alternative_names, {lower_ref(f.args.at(0))});
        return q.limit ? truncate(id, *q.limit) : id;
      }
      case FunctionKind::most_frequent_attribute_of: {
        NodeId input = lower_ref(f.args.at(0));
        if (f.attributes.size() != 1) semantic_error("MOST FREQUENT takes one attribute", q.span);
        check_attribute(f.attributes.front(), at(input).entity_concept, q);
        NodeId id = function_node(FunctionNodeKind::most_frequent, {input});
        plan_.nodes[id].attributes = f.attributes;
        return q.limit ? truncate(id, *q.limit) : id;
      }
      case FunctionKind::attributes_of: {
        NodeId input = lower_ref(f.args.at(0));
        if (f.attributes.empty()) semantic_error("attribute list is empty", q.span);
        for (const auto& a : f.attributes) check_attribute(a, at(input).entity_concept, q);
        PlanNode n;
        n.kind = NodeKind::project;
        n.result = ResultKind::table;
        n.entity_concept = at(input).entity_concept;
        n.inputs = {input};
        n.attributes = f.attributes;
        NodeId id = add(std::move(n));
        return q.limit ? truncate(id, *q.limit) : id;
      }
    }
    semantic_error("unsupported function", q.span);
  }

  const Corpus& corpus_;
  LogicalPlan plan_;
};

// Validation.

struct Checker {
  const LogicalPlan& plan;
  std::vector<Diagnostic> out;

  void report(NodeId id, std::string message) {
    Diagnostic d;
    d.code = DiagnosticCode::plan_error;
    d.message = "n" + std::to_string(id) + ": " + std::move(message);
    d.node = id;
    out.push_back(std::move(d));
  }

  bool valid_id(NodeId id) const { return id < plan.nodes.size(); }

  const PlanNode* input(const PlanNode& n, std::size_t i) const {
    if (i >= n.inputs.size() || !valid_id(n.inputs[i])) return nullptr;
    return &plan.nodes[n.inputs[i]];
  }

  /// Entity input i exists and has one of the allowed concepts.
  void expect_entities(const PlanNode& n, std::size_t i, std::initializer_list<Concept> allowed) {
    const PlanNode* in = input(n, i);
    if (!in) {
      report(n.id, "missing input " + std::to_string(i));
      return;
    }
    if (in->result != ResultKind::entities) {
      report(n.id, "input n" + std::to_string(in->id) + " does not produce entities");
      return;
    }
    if (allowed.size() > 0 && !is_one_of(in->entity_concept, allowed)) {
      report(n.id, "input n" + std::to_string(in->id) + " has concept " + std::string(concept_name(in->entity_concept)));
    }
  }

  void expect_arity(const PlanNode& n, std::size_t lo, std::size_t hi) {
    if (n.inputs.size() < lo || n.inputs.size() > hi) {
      report(n.id, std::string(node_kind_name(n.kind)) + " has " + std::to_string(n.inputs.size()) + " inputs");
    }
  }

  void expect_concept(const PlanNode& n, std::initializer_list<Concept> allowed) {
    if (!is_one_of(n.entity_concept, allowed)) {
      report(n.id, std::string(n.kind == NodeKind::predicate ? predicate_kind_name(n.predicate)
                                                             : aggregate_kind_name(n.aggregate)) +
                       " is not legal for " + plural(n.entity_concept));
    }
  }

  void candidates_match(const PlanNode& n) {
    const PlanNode* in = input(n, 0);
    if (in && in->result == ResultKind::entities && in->entity_concept != n.entity_concept) {
      report(n.id, "candidate concept differs from node concept");
    }
  }

  void check_relation(const PlanNode& n, std::size_t scope_index) {
    if (n.relation == Relation::coauthors) {
      expect_concept(n, {Concept::person});
    } else {
      expect_concept(n, {Concept::publication, Concept::person});
    }
    if (n.scoped) {
      expect_arity(n, scope_index + 1, scope_index + 1);
      expect_entities(n, scope_index, {Concept::publication});
    } else {
      expect_arity(n, scope_index, scope_index);
    }
  }

  void check_predicate(const PlanNode& n) {
    constexpr auto C = Concept::conference;
    constexpr auto J = Concept::journal;
    constexpr auto K = Concept::keyword;
    constexpr auto PU = Concept::publication;
    constexpr auto PE = Concept::person;
    constexpr auto I = Concept::institution;
    expect_entities(n, 0, {});
    candidates_match(n);
    auto unary = [&](std::initializer_list<Concept> self) {
      expect_concept(n, self);
      expect_arity(n, 1, 1);
    };
    auto binary = [&](std::initializer_list<Concept> self, std::initializer_list<Concept> arg) {
      expect_concept(n, self);
      expect_arity(n, 2, 2);
      expect_entities(n, 1, arg);
    };
    switch (n.predicate) {
      case PredicateKind::member_of:
        expect_arity(n, 2, 2);
        expect_entities(n, 1, {n.entity_concept});
        break;
      case PredicateKind::attribute_equals:
        expect_arity(n, 1, 1);
        if (!field_legal(n.field, n.entity_concept)) {
          report(n.id, std::string(field_name(n.field)) + " is not a field of " + plural(n.entity_concept));
        }
        break;
      case PredicateKind::year_compare: unary({PU, C, J}); break;
      case PredicateKind::about_keyword: binary({PU, C, J}, {K}); break;
      case PredicateKind::about_terms:
        unary({PU});
        if (!n.terms) report(n.id, "about_terms without an expression");
        break;
      case PredicateKind::hosts: binary({C, J}, {PU}); break;
      case PredicateKind::keyword_of: binary({K}, {C, J, PU, PE}); break;
      case PredicateKind::appeared_in: binary({PU}, {C, J}); break;
      case PredicateKind::cited_by:
      case PredicateKind::references: binary({PU, PE}, {PU}); break;
      case PredicateKind::edited_by:
      case PredicateKind::written_by: binary({PU}, {PE}); break;
      case PredicateKind::written_by_any:
        expect_concept(n, {PU});
        if (n.inputs.size() < 2) report(n.id, "written_by_any without person sets");
        for (std::size_t i = 1; i < n.inputs.size(); ++i) expect_entities(n, i, {PE});
        if (n.number < 1) report(n.id, "written_by_any count below 1");
        break;
      case PredicateKind::published_with: binary({PU}, {I}); break;
      case PredicateKind::authored:
      case PredicateKind::authored_only:
      case PredicateKind::authored_no:
      case PredicateKind::edited: binary({PE}, {PU}); break;
      case PredicateKind::works_for: binary({PE}, {I}); break;
      case PredicateKind::published_in: binary({PE}, {C, J}); break;
      case PredicateKind::with_members: binary({I}, {PE}); break;
      case PredicateKind::coauthor_of: binary({PE}, {PE}); break;
      case PredicateKind::metric_compare: unary({PU, PE, C, J, I}); break;
      case PredicateKind::length_compare:
        expect_arity(n, 1, 1);
        if (!text_attribute_legal(n.attribute, n.entity_concept)) {
          report(n.id, std::string(text_attribute_name(n.attribute)) + " is not an attribute of " +
                           plural(n.entity_concept));
        }
        break;
      case PredicateKind::count_compare: check_relation(n, 1); break;
    }
  }

  void check_aggregate(const PlanNode& n) {
    constexpr auto C = Concept::conference;
    constexpr auto J = Concept::journal;
    constexpr auto K = Concept::keyword;
    constexpr auto PU = Concept::publication;
    constexpr auto PE = Concept::person;
    constexpr auto I = Concept::institution;
    expect_entities(n, 0, {});
    candidates_match(n);
    if (n.rank && *n.rank == 0) report(n.id, "rank restriction below 1");
    switch (n.aggregate) {
      case AggregateKind::relation_count: check_relation(n, 1); break;
      case AggregateKind::year:
        expect_concept(n, {PU});
        expect_arity(n, 1, 1);
        break;
      case AggregateKind::publishing_in:
        expect_concept(n, {PE});
        expect_arity(n, 2, 2);
        expect_entities(n, 1, {C, J});
        break;
      case AggregateKind::researching_about:
        expect_concept(n, {PE, I});
        expect_arity(n, 2, 2);
        expect_entities(n, 1, {K});
        break;
      case AggregateKind::keyword_frequency:
        expect_concept(n, {K});
        expect_arity(n, 2, 2);
        expect_entities(n, 1, {C, J, PU, PE, K});
        break;
      case AggregateKind::related_keywords:
        expect_concept(n, {K});
        expect_entities(n, 1, {K});
        if (n.scoped) {
          expect_arity(n, 3, 3);
          expect_entities(n, 2, {PU});
        } else {
          expect_arity(n, 2, 2);
        }
        break;
      case AggregateKind::metric:
        expect_concept(n, {PU, PE, C, J, I});
        expect_arity(n, 1, 1);
        break;
      case AggregateKind::length:
        expect_arity(n, 1, 1);
        if (!text_attribute_legal(n.attribute, n.entity_concept)) {
          report(n.id, std::string(text_attribute_name(n.attribute)) + " is not an attribute of " +
                           plural(n.entity_concept));
        }
        break;
    }
  }

  void check_attributes(const PlanNode& n, Concept c) {
    const auto& allowed = attributes_for(c);
    for (const auto& a : n.attributes) {
      if (std::find(allowed.begin(), allowed.end(), a) == allowed.end()) {
        report(n.id, "\"" + a + "\" is not an attribute of " + plural(c));
      }
    }
  }

  void check_node(const PlanNode& n) {
    for (NodeId in : n.inputs) {
      if (!valid_id(in)) report(n.id, "input n" + std::to_string(in) + " does not exist");
    }
    switch (n.kind) {
      case NodeKind::scan: {
        expect_arity(n, 0, 0);
        bool pub_spec = n.specialisation != Specialisation::none && n.specialisation != Specialisation::author &&
                        n.specialisation != Specialisation::editor;
        bool person_spec = n.specialisation == Specialisation::author || n.specialisation == Specialisation::editor;
        if ((pub_spec && n.entity_concept != Concept::publication) ||
            (person_spec && n.entity_concept != Concept::person)) {
          report(n.id, "specialisation " + std::string(specialisation_name(n.specialisation)) + " does not apply to " +
                           plural(n.entity_concept));
        }
        break;
      }
      case NodeKind::constant:
        expect_arity(n, 0, 0);
        if (!std::is_sorted(n.ids.begin(), n.ids.end()) ||
            std::adjacent_find(n.ids.begin(), n.ids.end()) != n.ids.end()) {
          report(n.id, "constant ids are not sorted and unique");
        }
        break;
      case NodeKind::predicate: check_predicate(n); break;
      case NodeKind::set_op: {
        if (n.set_op == SetOpKind::or_not) {
          expect_arity(n, 3, 3);
        } else {
          expect_arity(n, 2, 2);
        }
        for (std::size_t i = 0; i < n.inputs.size(); ++i) {
          const PlanNode* in = input(n, i);
          if (!in) continue;
          if (in->result != ResultKind::entities) {
            report(n.id, "set operand n" + std::to_string(in->id) + " does not produce entities");
          } else if (in->entity_concept != n.entity_concept) {
            report(n.id, "set operands mix " + plural(n.entity_concept) + " and " + plural(in->entity_concept));
          }
        }
        break;
      }
      case NodeKind::aggregate: check_aggregate(n); break;
      case NodeKind::truncate: {
        expect_arity(n, 1, 1);
        if (n.limit == 0) report(n.id, "limit below 1");
        const PlanNode* in = input(n, 0);
        if (in && in->result == ResultKind::scalar) report(n.id, "truncate over a scalar");
        if (in && in->result != n.result) report(n.id, "truncate changes the result kind");
        break;
      }
      case NodeKind::project:
        expect_arity(n, 1, 1);
        expect_entities(n, 0, {});
        if (n.attributes.empty()) report(n.id, "project without attributes");
        if (const PlanNode* in = input(n, 0)) check_attributes(n, in->entity_concept);
        break;
      case NodeKind::count: expect_arity(n, 1, 1); break;
      case NodeKind::function:
        switch (n.function) {
          case FunctionNodeKind::core_ranks:
            expect_entities(n, 0, {Concept::person});
            if (n.scoped) {
              expect_arity(n, 2, 2);
              expect_entities(n, 1, {Concept::conference, Concept::journal, Concept::publication});
            } else {
              expect_arity(n, 1, 1);
            }
            break;
          case FunctionNodeKind::alternative_names:
            expect_arity(n, 1, 1);
            expect_entities(n, 0, {Concept::conference, Concept::journal, Concept::institution, Concept::person});
            break;
          case FunctionNodeKind::most_frequent:
            expect_arity(n, 1, 1);
            expect_entities(n, 0, {});
            if (n.attributes.size() != 1) report(n.id, "most_frequent needs exactly one attribute");
            if (const PlanNode* in = input(n, 0)) check_attributes(n, in->entity_concept);
            break;
        }
        break;
    }
    bool table = n.kind == NodeKind::project || n.kind == NodeKind::function;
    bool scalar = n.kind == NodeKind::count;
    if (n.kind != NodeKind::truncate) {
      ResultKind want = scalar ? ResultKind::scalar : table ? ResultKind::table : ResultKind::entities;
      if (n.result != want) report(n.id, "result kind should be " + std::string(result_kind_name(want)));
    }
  }

  /// Reports one cycle, if any, as nA -> nB -> ... -> nA.
  void check_acyclic() {
    enum class Mark : std::uint8_t { none, active, done };
    std::vector<Mark> mark(plan.nodes.size(), Mark::none);
    std::vector<NodeId> stack;
    bool found = false;
    std::function<void(NodeId)> visit = [&](NodeId id) {
      if (found) return;
      mark[id] = Mark::active;
      stack.push_back(id);
      for (NodeId in : plan.nodes[id].inputs) {
        if (!valid_id(in) || found) continue;
        if (mark[in] == Mark::active) {
          auto from = std::find(stack.begin(), stack.end(), in);
          std::string path;
          for (auto it = from; it != stack.end(); ++it) path += "n" + std::to_string(*it) + " -> ";
          path += "n" + std::to_string(in);
          report(in, "cycle " + path);
          found = true;
          return;
        }
        if (mark[in] == Mark::none) visit(in);
      }
      stack.pop_back();
      mark[id] = Mark::done;
    };
    for (NodeId id = 0; id < plan.nodes.size() && !found; ++id) {
      if (mark[id] == Mark::none) visit(id);
    }
  }

  void run() {
    if (plan.nodes.empty()) {
      Diagnostic d;
      d.code = DiagnosticCode::plan_error;
      d.message = "empty plan";
      out.push_back(std::move(d));
      return;
    }
    for (NodeId id = 0; id < plan.nodes.size(); ++id) {
      if (plan.nodes[id].id != id) report(id, "node id mismatch");
    }
    if (!valid_id(plan.output)) {
      report(plan.output, "output node does not exist");
      return;
    }
    check_acyclic();
    if (!out.empty()) return;
    for (const auto& n : plan.nodes) check_node(n);
  }
};

std::string ids_list(const std::vector<NodeId>& inputs) {
  std::string out;
  for (NodeId id : inputs) out += " n" + std::to_string(id);
  return out;
}

std::string node_args(const PlanNode& n) {
  std::ostringstream os;
  auto rank = [&] {
    if (n.rank) os << " rank=" << *n.rank;
  };
  switch (n.kind) {
    case NodeKind::scan:
      os << " " << concept_name(n.entity_concept);
      if (n.specialisation != Specialisation::none) os << " spec=" << specialisation_name(n.specialisation);
      break;
    case NodeKind::constant:
      os << " " << concept_name(n.entity_concept) << " size=" << n.ids.size() << " label=" << n.label;
      break;
    case NodeKind::predicate:
      os << " " << predicate_kind_name(n.predicate) << " " << concept_name(n.entity_concept);
      switch (n.predicate) {
        case PredicateKind::attribute_equals: os << " field=" << field_name(n.field) << " text=" << n.text; break;
        case PredicateKind::year_compare:
          os << " cmp=" << comparator_name(n.comparator) << " n=" << n.number;
          break;
        case PredicateKind::about_terms: os << " terms=" << n.text; break;
        case PredicateKind::written_by_any:
          os << " n=" << n.number << (n.distinct ? " distinct" : "");
          break;
        case PredicateKind::metric_compare:
          os << " metric=" << metric_name(n.metric) << " cmp=" << comparator_name(n.comparator) << " n=" << n.number;
          break;
        case PredicateKind::length_compare:
          os << " attr=" << text_attribute_name(n.attribute) << " cmp=" << comparator_name(n.comparator)
             << " n=" << n.number;
          break;
        case PredicateKind::count_compare:
          os << " relation=" << relation_name(n.relation) << " cmp=" << comparator_name(n.comparator)
             << " n=" << n.number << (n.scoped ? " scoped" : "");
          break;
        default: break;
      }
      break;
    case NodeKind::set_op: os << " " << set_op_name(n.set_op) << " " << concept_name(n.entity_concept); break;
    case NodeKind::aggregate:
      os << " " << aggregate_kind_name(n.aggregate) << " " << concept_name(n.entity_concept);
      if (n.aggregate == AggregateKind::relation_count) os << " relation=" << relation_name(n.relation);
      if (n.aggregate == AggregateKind::metric) os << " metric=" << metric_name(n.metric);
      if (n.aggregate == AggregateKind::length) os << " attr=" << text_attribute_name(n.attribute);
      os << " dir=" << (n.direction == Direction::descending ? "desc" : "asc");
      if (n.scoped) os << " scoped";
      if (n.min_score > 0) os << " min=" << n.min_score;
      rank();
      break;
    case NodeKind::truncate: os << " limit=" << n.limit; break;
    case NodeKind::project:
    case NodeKind::function: {
      if (n.kind == NodeKind::function) os << " " << function_node_kind_name(n.function);
      if (n.scoped) os << " scoped";
      if (!n.attributes.empty()) {
        os << " attrs=[";
        for (std::size_t i = 0; i < n.attributes.size(); ++i) os << (i ? "," : "") << n.attributes[i];
        os << "]";
      }
      break;
    }
    case NodeKind::count: break;
  }
  return os.str();
}

}  // namespace

LogicalPlan lower(const Query& query, const Corpus& corpus) { return Lowerer(corpus).run(query); }

std::vector<Diagnostic> validate(const LogicalPlan& plan) {
  Checker c{plan, {}};
  c.run();
  return std::move(c.out);
}

std::string to_debug_string(const LogicalPlan& plan) {
  std::string out;
  for (const auto& n : plan.nodes) {
    out += "n" + std::to_string(n.id) + " " + std::string(node_kind_name(n.kind)) + node_args(n);
    if (!n.inputs.empty()) out += " <-" + ids_list(n.inputs);
    out += "\n";
  }
  if (plan.output < plan.nodes.size()) {
    const auto& o = plan.nodes[plan.output];
    out += "output n" + std::to_string(o.id) + " " + std::string(result_kind_name(o.result));
    if (o.result == ResultKind::entities) out += " " + std::string(concept_name(o.entity_concept));
    out += "\n";
  }
  return out;
}

}  // namespace schenql
