#include "schenql/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "schenql/metrics.hpp"
#include "schenql/text_match.hpp"

namespace schenql {

std::string cell_to_string(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::string describe(const ResultSet& r, const Corpus& corpus) {
  std::ostringstream os;
  switch (r.kind) {
    case ResultKind::entities:
      os << "entities " << concept_name(r.entity_concept) << " (" << r.ids.size() << ")\n";
      for (auto id : r.ids) os << "  " << corpus.key_of(r.entity_concept, id) << "\n";
      break;
    case ResultKind::scalar: os << "scalar " << r.scalar << "\n"; break;
    case ResultKind::table:
      os << "table";
      for (const auto& c : r.table.columns) os << " " << c;
      os << " (" << r.table.rows.size() << ")\n";
      for (const auto& row : r.table.rows) {
        os << " ";
        for (const auto& c : row) os << " | " << cell_to_string(c);
        os << "\n";
      }
      break;
  }
  return os.str();
}

namespace {

bool compare_rational(const Rational& value, Comparator c, std::int64_t bound) {
  auto order = value <=> Rational(bound);
  switch (c) {
    case Comparator::eq: return order == 0;
    case Comparator::at_least: return order >= 0;
    case Comparator::at_most: return order <= 0;
    case Comparator::more_than: return order > 0;
    case Comparator::less_than: return order < 0;
  }
  return false;
}

std::string location_of(const Institution& i) {
  std::string out = i.city.value_or("");
  if (i.country) {
    if (!out.empty()) out += ", ";
    out += *i.country;
  }
  return out;
}

using Mask = std::vector<char>;

class Evaluator {
 public:
  Evaluator(const LogicalPlan& plan, const Corpus& corpus)
      : plan_(plan), corpus_(corpus), memo_(plan.nodes.size()), done_(plan.nodes.size(), false) {}

  ResultSet run() { return value(plan_.output); }

 private:
  const ResultSet& value(NodeId id) {
    if (!done_[id]) {
      memo_[id] = compute(plan_.nodes[id]);
      done_[id] = true;
    }
    return memo_[id];
  }

  std::size_t table_size(Concept c) const {
    if (c == Concept::conference || c == Concept::journal) return corpus_.venues().size();
    return corpus_.size(c);
  }

  Mask mask_of(NodeId id) {
    const ResultSet& r = value(id);
    Mask m(table_size(r.entity_concept), 0);
    for (auto i : r.ids) m[i] = 1;
    return m;
  }

  static bool any_in(const IndexList& xs, const Mask& m) {
    return std::any_of(xs.begin(), xs.end(), [&](EntityIndex x) { return m[x] != 0; });
  }

  static std::int64_t count_in(const IndexList& xs, const Mask* m) {
    if (!m) return static_cast<std::int64_t>(xs.size());
    return std::count_if(xs.begin(), xs.end(), [&](EntityIndex x) { return (*m)[x] != 0; });
  }

  /// Publications authored by an institution's members, without repeats.
  IndexList institution_publications(EntityIndex inst) const {
    std::set<EntityIndex> pubs;
    for (auto m : corpus_.members_of(inst)) {
      const auto& a = corpus_.authored_by(m);
      pubs.insert(a.begin(), a.end());
    }
    return {pubs.begin(), pubs.end()};
  }

  /// Publications an entity stands for in keyword and metric computations.
  IndexList associated(Concept c, EntityIndex e) const {
    switch (c) {
      case Concept::publication: return {e};
      case Concept::conference:
      case Concept::journal: return corpus_.publications_in(e);
      case Concept::person: return corpus_.authored_by(e);
      case Concept::institution: return institution_publications(e);
      case Concept::keyword: return corpus_.publications_with(e);
    }
    return {};
  }

  IndexList associated(const ResultSet& r) const {
    std::set<EntityIndex> pubs;
    for (auto e : r.ids) {
      auto a = associated(r.entity_concept, e);
      pubs.insert(a.begin(), a.end());
    }
    return {pubs.begin(), pubs.end()};
  }

  std::int64_t coauthor_count(EntityIndex person, const Mask* scope) const {
    std::set<EntityIndex> co;
    for (auto p : corpus_.authored_by(person)) {
      if (scope && !(*scope)[p]) continue;
      for (auto a : corpus_.authors_of(p)) {
        if (a != person) co.insert(a);
      }
    }
    return static_cast<std::int64_t>(co.size());
  }

  std::int64_t relation_count(Concept c, EntityIndex e, Relation r, const Mask* scope) const {
    if (r == Relation::coauthors) return coauthor_count(e, scope);
    auto edges = [&](EntityIndex pub) {
      return count_in(r == Relation::references ? corpus_.references_of(pub) : corpus_.cited_by(pub), scope);
    };
    if (c == Concept::publication) return edges(e);
    std::int64_t total = 0;
    for (auto p : corpus_.authored_by(e)) total += edges(p);
    return total;
  }

  int core_rank(Concept c, EntityIndex e) const {
    switch (c) {
      case Concept::conference:
      case Concept::journal: return core_rank_ordinal(corpus_.venues()[e].core_rank);
      case Concept::publication: {
        auto v = corpus_.venue_of(e);
        return v ? core_rank_ordinal(corpus_.venues()[*v].core_rank) : 0;
      }
      case Concept::person: {
        int best = 0;
        for (auto p : corpus_.authored_by(e)) best = std::max(best, core_rank(Concept::publication, p));
        return best;
      }
      case Concept::institution: {
        int best = 0;
        for (auto m : corpus_.members_of(e)) best = std::max(best, core_rank(Concept::person, m));
        return best;
      }
      case Concept::keyword: return 0;
    }
    return 0;
  }

  Rational metric(Concept c, EntityIndex e, Metric m) const {
    if (m == Metric::core_rank) return Rational(core_rank(c, e));
    std::vector<std::pair<std::int64_t, std::int64_t>> points;
    for (auto p : associated(c, e)) {
      points.emplace_back(corpus_.publications()[p].year, static_cast<std::int64_t>(corpus_.cited_by(p).size()));
    }
    return h_avg(points);
  }

  std::string text_value(Concept c, EntityIndex e, TextAttribute a) const {
    switch (c) {
      case Concept::conference:
      case Concept::journal: {
        const auto& v = corpus_.venues()[e];
        return a == TextAttribute::acronym ? v.acronym : v.name;
      }
      case Concept::publication: {
        const auto& p = corpus_.publications()[e];
        return a == TextAttribute::title ? p.title : p.abstract_text.value_or("");
      }
      case Concept::person: return corpus_.persons()[e].primary_name;
      case Concept::institution: {
        const auto& i = corpus_.institutions()[e];
        return a == TextAttribute::location ? location_of(i) : i.name;
      }
      case Concept::keyword: return corpus_.keywords()[e];
    }
    return "";
  }

  /// Projected attribute; empty optional when the record has no value.
  std::optional<Cell> attribute_value(Concept c, EntityIndex e, const std::string& attr) const {
    auto opt = [](const std::optional<std::string>& s) -> std::optional<Cell> {
      if (!s) return std::nullopt;
      return Cell(*s);
    };
    if (attr == "dblp_key") return Cell(std::string(corpus_.key_of(c, e)));
    switch (c) {
      case Concept::conference:
      case Concept::journal: {
        const auto& v = corpus_.venues()[e];
        return Cell(attr == "acronym" ? v.acronym : v.name);
      }
      case Concept::publication: {
        const auto& p = corpus_.publications()[e];
        if (attr == "title") return Cell(p.title);
        if (attr == "abstract") return opt(p.abstract_text);
        if (attr == "year") return Cell(p.year);
        if (attr == "doi") return opt(p.doi);
        if (attr == "isbn") return opt(p.isbn);
        return opt(p.volume);
      }
      case Concept::person: {
        const auto& p = corpus_.persons()[e];
        if (attr == "orcid") return opt(p.orcid);
        return Cell(p.primary_name);
      }
      case Concept::institution: {
        const auto& i = corpus_.institutions()[e];
        if (attr == "city") return opt(i.city);
        if (attr == "country") return opt(i.country);
        return Cell(i.name);
      }
      case Concept::keyword: return Cell(corpus_.keywords()[e]);
    }
    return std::nullopt;
  }

  bool field_equals(Concept c, EntityIndex e, Field f, const std::string& text) const {
    auto eq = [&](const std::optional<std::string>& v) { return v && *v == text; };
    auto ieq = [&](const std::optional<std::string>& v) { return v && iequals(*v, text); };
    if (f == Field::dblp_key) return corpus_.key_of(c, e) == text;
    switch (c) {
      case Concept::publication: {
        const auto& p = corpus_.publications()[e];
        if (f == Field::doi) return eq(p.doi);
        if (f == Field::isbn) return eq(p.isbn);
        if (f == Field::volume) return eq(p.volume);
        return false;
      }
      case Concept::person: return f == Field::orcid && eq(corpus_.persons()[e].orcid);
      case Concept::conference:
      case Concept::journal:
        if (f == Field::acronym) return iequals(corpus_.venues()[e].acronym, text);
        if (f == Field::volume) {
          const auto& pubs = corpus_.publications_in(e);
          return std::any_of(pubs.begin(), pubs.end(),
                             [&](EntityIndex p) { return eq(corpus_.publications()[p].volume); });
        }
        return false;
      case Concept::institution: {
        const auto& i = corpus_.institutions()[e];
        if (f == Field::city) return ieq(i.city);
        if (f == Field::country) return ieq(i.country);
        return false;
      }
      case Concept::keyword: return false;
    }
    return false;
  }

  ResultSet filter(const PlanNode& n) {
    const ResultSet& in = value(n.inputs[0]);
    const Concept c = in.entity_concept;
    std::vector<Mask> args;
    for (std::size_t i = 1; i < n.inputs.size(); ++i) args.push_back(mask_of(n.inputs[i]));
    const auto& pubs = corpus_.publications();
    auto venue_any = [&](EntityIndex v, auto&& test) {
      const auto& ps = corpus_.publications_in(v);
      return std::any_of(ps.begin(), ps.end(), test);
    };
    auto test = [&](EntityIndex e) -> bool {
      switch (n.predicate) {
        case PredicateKind::member_of: return args[0][e] != 0;
        case PredicateKind::attribute_equals: return field_equals(c, e, n.field, n.text);
        case PredicateKind::year_compare:
          if (c == Concept::publication) return compare(pubs[e].year, n.comparator, n.number);
          return venue_any(e, [&](EntityIndex p) { return compare(pubs[p].year, n.comparator, n.number); });
        case PredicateKind::about_keyword:
          if (c == Concept::publication) return any_in(corpus_.keywords_of(e), args[0]);
          return venue_any(e, [&](EntityIndex p) { return any_in(corpus_.keywords_of(p), args[0]); });
        case PredicateKind::about_terms: return match_terms(searchable_text(pubs[e]), *n.terms);
        case PredicateKind::hosts: return any_in(corpus_.publications_in(e), args[0]);
        case PredicateKind::keyword_of: return false;  // handled in keyword_of()
        case PredicateKind::appeared_in: {
          auto v = corpus_.venue_of(e);
          return v && args[0][*v];
        }
        case PredicateKind::cited_by:
        case PredicateKind::references: {
          auto edge = [&](EntityIndex p) {
            return any_in(n.predicate == PredicateKind::cited_by ? corpus_.cited_by(p) : corpus_.references_of(p),
                          args[0]);
          };
          if (c == Concept::publication) return edge(e);
          const auto& a = corpus_.authored_by(e);
          return std::any_of(a.begin(), a.end(), edge);
        }
        case PredicateKind::edited_by: return any_in(corpus_.editors_of(e), args[0]);
        case PredicateKind::written_by: return any_in(corpus_.authors_of(e), args[0]);
        case PredicateKind::written_by_any: {
          const auto& authors = corpus_.authors_of(e);
          std::int64_t hits = 0;
          if (n.distinct) {
            for (const auto& m : args) hits += any_in(authors, m) ? 1 : 0;
          } else {
            for (auto a : authors) {
              hits += std::any_of(args.begin(), args.end(), [&](const Mask& m) { return m[a] != 0; }) ? 1 : 0;
            }
          }
          return hits >= n.number;
        }
        case PredicateKind::published_with: {
          const auto& authors = corpus_.authors_of(e);
          return std::any_of(authors.begin(), authors.end(),
                             [&](EntityIndex a) { return any_in(corpus_.affiliations_of(a), args[0]); });
        }
        case PredicateKind::authored: return any_in(corpus_.authored_by(e), args[0]);
        case PredicateKind::authored_only: {
          const auto& a = corpus_.authored_by(e);
          return !a.empty() && std::all_of(a.begin(), a.end(), [&](EntityIndex p) { return args[0][p] != 0; });
        }
        case PredicateKind::authored_no: return !any_in(corpus_.authored_by(e), args[0]);
        case PredicateKind::edited: return any_in(corpus_.edited_by(e), args[0]);
        case PredicateKind::works_for: return any_in(corpus_.affiliations_of(e), args[0]);
        case PredicateKind::published_in: {
          const auto& a = corpus_.authored_by(e);
          return std::any_of(a.begin(), a.end(), [&](EntityIndex p) {
            auto v = corpus_.venue_of(p);
            return v && args[0][*v];
          });
        }
        case PredicateKind::with_members: return any_in(corpus_.members_of(e), args[0]);
        case PredicateKind::coauthor_of: {
          for (auto p : corpus_.authored_by(e)) {
            for (auto a : corpus_.authors_of(p)) {
              if (a != e && args[0][a]) return true;
            }
          }
          return false;
        }
        case PredicateKind::metric_compare: return compare_rational(metric(c, e, n.metric), n.comparator, n.number);
        case PredicateKind::length_compare:
          return compare(static_cast<std::int64_t>(utf8_length(text_value(c, e, n.attribute))), n.comparator,
                         n.number);
        case PredicateKind::count_compare:
          return compare(relation_count(c, e, n.relation, n.scoped ? &args[0] : nullptr), n.comparator, n.number);
      }
      return false;
    };
    ResultSet out;
    out.entity_concept = c;
    if (n.predicate == PredicateKind::keyword_of) {
      Mask attached(corpus_.keywords().size(), 0);
      for (auto p : associated(value(n.inputs[1]))) {
        for (auto k : corpus_.keywords_of(p)) attached[k] = 1;
      }
      for (auto e : in.ids) {
        if (attached[e]) out.ids.push_back(e);
      }
      return out;
    }
    for (auto e : in.ids) {
      if (test(e)) out.ids.push_back(e);
    }
    return out;
  }

  ResultSet scan(const PlanNode& n) const {
    ResultSet out;
    out.entity_concept = n.entity_concept;
    for (auto e : corpus_.all(n.entity_concept)) {
      bool keep = true;
      switch (n.specialisation) {
        case Specialisation::none: break;
        case Specialisation::author: keep = !corpus_.authored_by(e).empty(); break;
        case Specialisation::editor: keep = !corpus_.edited_by(e).empty(); break;
        default:
          keep = pub_type_name(corpus_.publications()[e].pub_type) == specialisation_name(n.specialisation);
          break;
      }
      if (keep) out.ids.push_back(e);
    }
    return out;
  }

  ResultSet set_operation(const PlanNode& n) {
    const ResultSet& l = value(n.inputs[0]);
    IndexList a = l.ids;
    IndexList b = value(n.inputs[1]).ids;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ResultSet out;
    out.entity_concept = n.entity_concept;
    switch (n.set_op) {
      case SetOpKind::and_:
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids));
        break;
      case SetOpKind::or_: std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids)); break;
      case SetOpKind::and_not:
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.ids));
        break;
      case SetOpKind::or_not: {
        IndexList u = value(n.inputs[2]).ids;
        std::sort(u.begin(), u.end());
        IndexList complement;
        std::set_difference(u.begin(), u.end(), b.begin(), b.end(), std::back_inserter(complement));
        std::set_union(a.begin(), a.end(), complement.begin(), complement.end(), std::back_inserter(out.ids));
        break;
      }
    }
    return out;
  }

  ResultSet aggregate(const PlanNode& n) {
    const ResultSet& in = value(n.inputs[0]);
    const Concept c = in.entity_concept;
    std::optional<Mask> arg;
    if (n.inputs.size() > 1) arg = mask_of(n.inputs[1]);
    std::vector<BasicScoredItem<EntityIndex>> items;
    const auto& pubs = corpus_.publications();

    // Keyword-scoring kinds count publications per candidate keyword.
    std::vector<std::int64_t> keyword_counts;
    Mask keyword_candidates;
    if (n.aggregate == AggregateKind::keyword_frequency || n.aggregate == AggregateKind::related_keywords) {
      keyword_counts.assign(corpus_.keywords().size(), 0);
      keyword_candidates.assign(corpus_.keywords().size(), 1);
      if (n.aggregate == AggregateKind::keyword_frequency) {
        const ResultSet& source = value(n.inputs[1]);
        if (source.entity_concept == Concept::keyword) {
          keyword_candidates = *arg;
          for (auto k : source.ids) keyword_counts[k] = static_cast<std::int64_t>(corpus_.publications_with(k).size());
        } else {
          for (auto p : associated(source)) {
            for (auto k : corpus_.keywords_of(p)) ++keyword_counts[k];
          }
        }
      } else {
        std::optional<Mask> scope;
        if (n.scoped) scope = mask_of(n.inputs[2]);
        std::set<EntityIndex> with_seed;
        for (auto k : value(n.inputs[1]).ids) {
          for (auto p : corpus_.publications_with(k)) {
            if (!scope || (*scope)[p]) with_seed.insert(p);
          }
        }
        for (auto p : with_seed) {
          for (auto k : corpus_.keywords_of(p)) ++keyword_counts[k];
        }
        for (auto k : value(n.inputs[1]).ids) keyword_candidates[k] = 0;
      }
    }

    for (auto e : in.ids) {
      Rational score;
      switch (n.aggregate) {
        case AggregateKind::relation_count:
          score = Rational(relation_count(c, e, n.relation, n.scoped ? &*arg : nullptr));
          break;
        case AggregateKind::year: score = Rational(pubs[e].year); break;
        case AggregateKind::publishing_in: {
          std::int64_t k = 0;
          for (auto p : corpus_.authored_by(e)) {
            auto v = corpus_.venue_of(p);
            if (v && (*arg)[*v]) ++k;
          }
          score = Rational(k);
          break;
        }
        case AggregateKind::researching_about: {
          std::int64_t k = 0;
          for (auto p : associated(c, e)) k += any_in(corpus_.keywords_of(p), *arg) ? 1 : 0;
          score = Rational(k);
          break;
        }
        case AggregateKind::keyword_frequency:
        case AggregateKind::related_keywords:
          if (!keyword_candidates[e]) continue;
          score = Rational(keyword_counts[e]);
          break;
        case AggregateKind::metric: score = metric(c, e, n.metric); break;
        case AggregateKind::length:
          score = Rational(static_cast<std::int64_t>(utf8_length(text_value(c, e, n.attribute))));
          break;
      }
      if (score < Rational(n.min_score)) continue;
      items.push_back({e, score});
    }
    ResultSet out;
    out.entity_concept = c;
    out.ids = rank_restrict_items(std::move(items), n.rank.value_or(0), n.direction);
    return out;
  }

  ResultSet function(const PlanNode& n) {
    ResultSet out;
    out.kind = ResultKind::table;
    const ResultSet& in = value(n.inputs[0]);
    switch (n.function) {
      case FunctionNodeKind::core_ranks: {
        out.table.columns = {"core_rank", "count"};
        std::optional<Mask> scope;
        if (n.scoped) {
          const ResultSet& s = value(n.inputs[1]);
          scope = Mask(corpus_.publications().size(), 0);
          for (auto p : associated(s)) (*scope)[p] = 1;
        }
        std::map<int, std::int64_t, std::greater<>> counts;
        for (auto p : associated(in)) {
          if (scope && !(*scope)[p]) continue;
          int r = core_rank(Concept::publication, p);
          if (r > 0) ++counts[r];
        }
        for (const auto& [r, k] : counts) {
          out.table.rows.push_back({Cell(std::string(core_rank_name(static_cast<CoreRank>(r)))), Cell(k)});
        }
        break;
      }
      case FunctionNodeKind::alternative_names: {
        out.table.columns = {"dblp_key", "alternative_name"};
        std::set<std::pair<std::string, std::string>> rows;
        for (auto e : in.ids) {
          const std::vector<std::string>* aliases = nullptr;
          switch (in.entity_concept) {
            case Concept::conference:
            case Concept::journal: aliases = &corpus_.venues()[e].aliases; break;
            case Concept::person: aliases = &corpus_.persons()[e].aliases; break;
            case Concept::institution: aliases = &corpus_.institutions()[e].aliases; break;
            default: break;
          }
          if (!aliases) continue;
          for (const auto& a : *aliases) rows.emplace(std::string(corpus_.key_of(in.entity_concept, e)), a);
        }
        for (const auto& [k, a] : rows) out.table.rows.push_back({Cell(k), Cell(a)});
        break;
      }
      case FunctionNodeKind::most_frequent: {
        const std::string& attr = n.attributes.front();
        out.table.columns = {attr, "count"};
        std::map<Cell, std::int64_t> counts;
        for (auto e : in.ids) {
          if (auto v = attribute_value(in.entity_concept, e, attr)) ++counts[*v];
        }
        std::int64_t best = 0;
        for (const auto& [v, k] : counts) best = std::max(best, k);
        for (const auto& [v, k] : counts) {
          if (k == best) out.table.rows.push_back({v, Cell(k)});
        }
        break;
      }
    }
    return out;
  }

  ResultSet project(const PlanNode& n) {
    const ResultSet& in = value(n.inputs[0]);
    ResultSet out;
    out.kind = ResultKind::table;
    out.table.columns = n.attributes;
    for (auto e : in.ids) {
      std::vector<Cell> row;
      for (const auto& a : n.attributes) row.push_back(attribute_value(in.entity_concept, e, a).value_or(Cell("")));
      out.table.rows.push_back(std::move(row));
    }
    return out;
  }

  ResultSet compute(const PlanNode& n) {
    switch (n.kind) {
      case NodeKind::scan: return scan(n);
      case NodeKind::constant: {
        ResultSet out;
        out.entity_concept = n.entity_concept;
        out.ids = n.ids;
        return out;
      }
      case NodeKind::predicate: return filter(n);
      case NodeKind::set_op: return set_operation(n);
      case NodeKind::aggregate: return aggregate(n);
      case NodeKind::truncate: {
        ResultSet out = value(n.inputs[0]);
        if (out.kind == ResultKind::entities && out.ids.size() > n.limit) out.ids.resize(n.limit);
        if (out.kind == ResultKind::table && out.table.rows.size() > n.limit) out.table.rows.resize(n.limit);
        return out;
      }
      case NodeKind::project: return project(n);
      case NodeKind::count: {
        const ResultSet& in = value(n.inputs[0]);
        ResultSet out;
        out.kind = ResultKind::scalar;
        switch (in.kind) {
          case ResultKind::entities: out.scalar = static_cast<std::int64_t>(in.ids.size()); break;
          case ResultKind::table: out.scalar = static_cast<std::int64_t>(in.table.rows.size()); break;
          case ResultKind::scalar: out.scalar = 1; break;
        }
        return out;
      }
      case NodeKind::function: return function(n);
    }
    return {};
  }

  const LogicalPlan& plan_;
  const Corpus& corpus_;
  std::vector<ResultSet> memo_;
  std::vector<bool> done_;
};

}  // namespace

ResultSet evaluate(const LogicalPlan& plan, const Corpus& corpus) {
  auto problems = validate(plan);
  if (!problems.empty()) throw QueryError(problems.front());
  return Evaluator(plan, corpus).run();
}

}  // namespace schenql
