#include <algorithm>
#include <functional>
#include <set>

#include "schenql/metrics.hpp"
#include "schenql/sql.hpp"
#include "schenql/text_match.hpp"

namespace schenql {

std::string emit_schema() {
  return R"(CREATE TABLE venue (
  id TEXT PRIMARY KEY,
  kind TEXT NOT NULL CHECK (kind IN ('conference', 'journal')),
  name TEXT NOT NULL,
  acronym TEXT NOT NULL CHECK (acronym <> '')
);
CREATE TABLE core_rank (
  venue TEXT PRIMARY KEY REFERENCES venue (id),
  grade TEXT NOT NULL,
  ordinal INTEGER NOT NULL CHECK (ordinal BETWEEN 1 AND 4)
);
CREATE TABLE institution (
  id TEXT PRIMARY KEY,
  name TEXT NOT NULL CHECK (name <> ''),
  city TEXT,
  country TEXT
);
CREATE TABLE person (
  id TEXT PRIMARY KEY,
  orcid TEXT,
  name TEXT NOT NULL CHECK (name <> '')
);
CREATE TABLE publication (
  id TEXT PRIMARY KEY,
  doi TEXT,
  isbn TEXT,
  title TEXT NOT NULL,
  abstract TEXT,
  year INTEGER NOT NULL CHECK (year >= 0),
  pub_type TEXT NOT NULL,
  venue TEXT REFERENCES venue (id),
  volume TEXT
);
CREATE TABLE authorship (
  pub TEXT NOT NULL REFERENCES publication (id),
  person TEXT NOT NULL REFERENCES person (id),
  position INTEGER NOT NULL,
  PRIMARY KEY (pub, person)
);
CREATE TABLE editorship (
  pub TEXT NOT NULL REFERENCES publication (id),
  person TEXT NOT NULL REFERENCES person (id),
  PRIMARY KEY (pub, person)
);
CREATE TABLE reference (
  src TEXT NOT NULL REFERENCES publication (id),
  dst TEXT NOT NULL REFERENCES publication (id),
  PRIMARY KEY (src, dst),
  CHECK (src <> dst)
);
CREATE TABLE pub_keyword (
  pub TEXT NOT NULL REFERENCES publication (id),
  keyword TEXT NOT NULL,
  PRIMARY KEY (pub, keyword)
);
CREATE TABLE pub_term (
  pub TEXT NOT NULL REFERENCES publication (id),
  term TEXT NOT NULL,
  PRIMARY KEY (pub, term)
);
CREATE TABLE affiliation (
  person TEXT NOT NULL REFERENCES person (id),
  institution TEXT NOT NULL REFERENCES institution (id),
  PRIMARY KEY (person, institution)
);
CREATE TABLE alias (
  kind TEXT NOT NULL CHECK (kind IN ('venue', 'person', 'institution')),
  entity TEXT NOT NULL,
  alias TEXT NOT NULL,
  PRIMARY KEY (kind, entity, alias)
);
)";
}

std::string format_artifact(const SqlArtifact& a) {
  std::string out = a.statement;
  if (out.empty() || out.back() != '\n') out += "\n";
  out += "-- parameters\n";
  for (std::size_t i = 0; i < a.parameters.size(); ++i) {
    out += "-- " + std::to_string(i + 1) + ": ";
    if (const auto* n = std::get_if<std::int64_t>(&a.parameters[i])) {
      out += std::to_string(*n);
    } else {
      std::string s = std::get<std::string>(a.parameters[i]);
      out += "'";
      for (char ch : s) {
        if (ch == '\n') {
          out += "\\n";
          continue;
        }
        if (ch == '\'') out += "'";
        out += ch;
      }
      out += "'";
    }
    out += "\n";
  }
  return out;
}

namespace {

/// SQL text with parameters bound in textual order.
struct Sql {
  std::string text;
  std::vector<Cell> params;

  Sql() = default;
  Sql(const char* t) : text(t) {}  // NOLINT(google-explicit-constructor)
  Sql(std::string t) : text(std::move(t)) {}  // NOLINT(google-explicit-constructor)

  Sql& operator+=(const Sql& other) {
    text += other.text;
    params.insert(params.end(), other.params.begin(), other.params.end());
    return *this;
  }
  friend Sql operator+(Sql a, const Sql& b) {
    a += b;
    return a;
  }
};

Sql param(Cell c) {
  Sql s("?");
  s.params.push_back(std::move(c));
  return s;
}

Sql join(const std::vector<Sql>& parts, const char* sep) {
  Sql out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string name(NodeId id) { return "n" + std::to_string(id); }
std::string ids_of(NodeId id) { return "(SELECT id FROM " + name(id) + ")"; }

const char* op(Comparator c) {
  switch (c) {
    case Comparator::eq: return " = ";
    case Comparator::at_least: return " >= ";
    case Comparator::at_most: return " <= ";
    case Comparator::more_than: return " > ";
    case Comparator::less_than: return " < ";
  }
  return " = ";
}

const char* entity_table(Concept c) {
  switch (c) {
    case Concept::conference:
    case Concept::journal: return "venue";
    case Concept::publication: return "publication";
    case Concept::person: return "person";
    case Concept::institution: return "institution";
    case Concept::keyword: return nullptr;
  }
  return nullptr;
}

/// (id, pub) pairs linking entities of a concept to their publications.
std::string entity_pubs(Concept c) {
  switch (c) {
    case Concept::publication: return "(SELECT id, id AS pub FROM publication)";
    case Concept::conference:
    case Concept::journal: return "(SELECT venue AS id, id AS pub FROM publication WHERE venue IS NOT NULL)";
    case Concept::person: return "(SELECT person AS id, pub FROM authorship)";
    case Concept::institution:
      return "(SELECT DISTINCT f.institution AS id, a.pub FROM affiliation f JOIN authorship a ON a.person = f.person)";
    case Concept::keyword: return "(SELECT keyword AS id, pub FROM pub_keyword)";
  }
  return "";
}

/// Publications associated with the entities of node `id`.
std::string pubs_of_set(NodeId id, Concept c) {
  return "(SELECT x.pub FROM " + entity_pubs(c) + " x WHERE x.id IN " + ids_of(id) + ")";
}

class Emitter {
 public:
  Emitter(const LogicalPlan& plan, const Corpus& corpus) : plan_(plan), corpus_(corpus) {}

  SqlArtifact run() {
    auto problems = validate(plan_);
    if (!problems.empty()) throw SqlEmitError("invalid plan: " + problems.front().message);
    std::vector<NodeId> order;
    std::vector<bool> seen(plan_.nodes.size(), false);
    std::function<void(NodeId)> visit = [&](NodeId id) {
      if (seen[id]) return;
      seen[id] = true;
      for (NodeId in : plan_.nodes[id].inputs) visit(in);
      order.push_back(id);
    };
    visit(plan_.output);
    for (NodeId id : order) node(plan_.nodes[id]);

    Sql stmt("WITH\n");
    stmt += join(ctes_, ",\n");
    stmt += "\n";
    const PlanNode& out = plan_.output_node();
    SqlArtifact a;
    a.result = out.result;
    switch (out.result) {
      case ResultKind::entities:
        stmt += "SELECT id FROM " + name(out.id) + " ORDER BY ord, id";
        a.columns = {"id"};
        break;
      case ResultKind::scalar:
        stmt += "SELECT value FROM " + name(out.id);
        a.columns = {"value"};
        break;
      case ResultKind::table: {
        a.columns = columns_[out.id];
        std::vector<Sql> cols;
        for (std::size_t i = 0; i < a.columns.size(); ++i) {
          cols.emplace_back("col" + std::to_string(i) + " AS \"" + a.columns[i] + "\"");
        }
        stmt += "SELECT " + join(cols, ", ") + " FROM " + name(out.id) + " ORDER BY ord";
        break;
      }
    }
    stmt += "\n";
    a.statement = stmt.text;
    a.parameters = stmt.params;
    return a;
  }

 private:
  void cte(const std::string& cte_name, const Sql& body) { ctes_.push_back("  " + cte_name + " AS (" + body + ")"); }

  const PlanNode& at(NodeId id) const { return plan_.nodes[id]; }

  void node(const PlanNode& n) {
    switch (n.kind) {
      case NodeKind::scan: scan(n); return;
      case NodeKind::constant: constant(n); return;
      case NodeKind::predicate: predicate(n); return;
      case NodeKind::set_op: set_op(n); return;
      case NodeKind::aggregate: aggregate(n); return;
      case NodeKind::truncate: truncate(n); return;
      case NodeKind::project: project(n); return;
      case NodeKind::count:
        cte(name(n.id), Sql("SELECT COUNT(*) AS value FROM " + name(n.inputs[0])));
        return;
      case NodeKind::function: function(n); return;
    }
    throw SqlEmitError("unsupported node kind " + std::string(node_kind_name(n.kind)));
  }

  void scan(const PlanNode& n) {
    Sql s;
    switch (n.entity_concept) {
      case Concept::keyword: s = "SELECT DISTINCT keyword AS id, 0 AS ord FROM pub_keyword"; break;
      case Concept::conference:
      case Concept::journal:
        s = Sql("SELECT id, 0 AS ord FROM venue WHERE kind = ") + param(std::string(concept_name(n.entity_concept)));
        break;
      default:
        s = Sql(std::string("SELECT id, 0 AS ord FROM ") + entity_table(n.entity_concept) + " e");
        if (n.specialisation == Specialisation::author) {
          s += " WHERE EXISTS (SELECT 1 FROM authorship a WHERE a.person = e.id)";
        } else if (n.specialisation == Specialisation::editor) {
          s += " WHERE EXISTS (SELECT 1 FROM editorship d WHERE d.person = e.id)";
        } else if (n.specialisation != Specialisation::none) {
          s += Sql(" WHERE e.pub_type = ") + param(std::string(specialisation_name(n.specialisation)));
        }
        break;
    }
    cte(name(n.id), s);
  }

  void constant(const PlanNode& n) {
    Sql s;
    if (n.entity_concept == Concept::keyword) {
      s = "SELECT DISTINCT keyword AS id, 0 AS ord FROM pub_keyword";
    } else {
      s = Sql(std::string("SELECT id, 0 AS ord FROM ") + entity_table(n.entity_concept));
    }
    if (n.ids.empty()) {
      s += " WHERE 1 = 0";
    } else {
      std::vector<Sql> keys;
      for (auto i : n.ids) keys.push_back(param(std::string(corpus_.key_of(n.entity_concept, i))));
      s += Sql(n.entity_concept == Concept::keyword ? " WHERE keyword IN (" : " WHERE id IN (") + join(keys, ", ") + ")";
    }
    cte(name(n.id), s);
  }

  // Per-candidate expressions; `c` is the candidate row and `e` its entity row.

  Sql count_expr(const PlanNode& n, Concept c, std::optional<NodeId> scope) const {
    std::string in_scope;
    if (n.relation == Relation::coauthors) {
      std::string s =
          "(SELECT COUNT(DISTINCT b.person) FROM authorship a JOIN authorship b ON b.pub = a.pub "
          "WHERE a.person = c.id AND b.person <> c.id";
      if (scope) s += " AND a.pub IN " + ids_of(*scope);
      return Sql(s + ")");
    }
    bool refs = n.relation == Relation::references;
    std::string own = refs ? "r.src" : "r.dst";
    std::string other = refs ? "r.dst" : "r.src";
    std::string s;
    if (c == Concept::publication) {
      s = "(SELECT COUNT(*) FROM reference r WHERE " + own + " = c.id";
    } else {
      s = "(SELECT COUNT(*) FROM authorship a JOIN reference r ON " + own + " = a.pub WHERE a.person = c.id";
    }
    if (scope) s += " AND " + other + " IN " + ids_of(*scope);
    return Sql(s + ")");
  }

  static std::string core_rank_expr(Concept c) {
    switch (c) {
      case Concept::keyword: return "0";
      case Concept::conference:
      case Concept::journal: return "COALESCE((SELECT r.ordinal FROM core_rank r WHERE r.venue = c.id), 0)";
      default:
        return "COALESCE((SELECT MAX(r.ordinal) FROM " + entity_pubs(c) +
               " x JOIN publication p ON p.id = x.pub JOIN core_rank r ON r.venue = p.venue WHERE x.id = c.id), 0)";
    }
  }

  /// Emits nID_h(id, sum_h, years) with the yearly h-index sums per entity.
  std::string h_cte(const PlanNode& n, Concept c) {
    std::string h = name(n.id) + "_h";
    cte(h, Sql("SELECT w.id, SUM(CASE WHEN w.cites >= w.rn THEN 1 ELSE 0 END) AS sum_h, "
               "COUNT(DISTINCT w.year) AS years FROM (SELECT x.id, p.year, "
               "(SELECT COUNT(*) FROM reference r WHERE r.dst = p.id) AS cites, "
               "ROW_NUMBER() OVER (PARTITION BY x.id, p.year ORDER BY "
               "(SELECT COUNT(*) FROM reference r WHERE r.dst = p.id) DESC, p.id) AS rn FROM " +
               entity_pubs(c) + " x JOIN publication p ON p.id = x.pub) w GROUP BY w.id"));
    return h;
  }

  static std::string text_expr(Concept c, TextAttribute a) {
    switch (c) {
      case Concept::conference:
      case Concept::journal: return a == TextAttribute::acronym ? "e.acronym" : "e.name";
      case Concept::publication: return a == TextAttribute::title ? "e.title" : "COALESCE(e.abstract, '')";
      case Concept::person: return "e.name";
      case Concept::institution:
        if (a != TextAttribute::location) return "e.name";
        return "CASE WHEN COALESCE(e.city, '') <> '' AND e.country IS NOT NULL THEN e.city || ', ' || e.country "
               "ELSE COALESCE(e.city, '') || COALESCE(e.country, '') END";
      case Concept::keyword: return "c.id";
    }
    return "''";
  }

  static Sql terms_expr(const TermExpr& t) {
    if (const auto* w = std::get_if<TermExpr::Word>(&t.node)) {
      return Sql("EXISTS (SELECT 1 FROM pub_term t WHERE t.pub = c.id AND t.term = ") + param(w->token) + ")";
    }
    std::vector<Sql> parts;
    bool is_and = std::holds_alternative<TermExpr::And>(t.node);
    const auto& children = is_and ? std::get<TermExpr::And>(t.node).children : std::get<TermExpr::Or>(t.node).children;
    for (const auto& ch : children) parts.push_back(terms_expr(ch));
    return Sql("(") + join(parts, is_and ? " AND " : " OR ") + ")";
  }

  /// Candidate rows of node `in`, joined with their entity table as `e`.
  static std::string from_candidates(NodeId in, Concept c) {
    std::string s = " FROM " + name(in) + " c";
    if (const char* t = entity_table(c)) s += std::string(" JOIN ") + t + " e ON e.id = c.id";
    return s;
  }

  Sql condition(const PlanNode& n, Concept c, std::string& joins) {
    auto arg = [&](std::size_t i) { return ids_of(n.inputs.at(i)); };
    auto num = [&] { return param(n.number); };
    bool venue = c == Concept::conference || c == Concept::journal;
    switch (n.predicate) {
      case PredicateKind::member_of: return Sql("c.id IN " + arg(1));
      case PredicateKind::attribute_equals: {
        Sql text = param(n.text);
        if (n.field == Field::dblp_key) return Sql("c.id = ") + text;
        switch (c) {
          case Concept::publication:
            if (n.field == Field::doi) return Sql("e.doi = ") + text;
            if (n.field == Field::isbn) return Sql("e.isbn = ") + text;
            if (n.field == Field::volume) return Sql("e.volume = ") + text;
            break;
          case Concept::person:
            if (n.field == Field::orcid) return Sql("e.orcid = ") + text;
            break;
          case Concept::conference:
          case Concept::journal:
            if (n.field == Field::acronym) return Sql("LOWER(e.acronym) = LOWER(") + text + ")";
            if (n.field == Field::volume) {
              return Sql("EXISTS (SELECT 1 FROM publication p WHERE p.venue = c.id AND p.volume = ") + text + ")";
            }
            break;
          case Concept::institution:
            if (n.field == Field::city) return Sql("LOWER(e.city) = LOWER(") + text + ")";
            if (n.field == Field::country) return Sql("LOWER(e.country) = LOWER(") + text + ")";
            break;
          case Concept::keyword: break;
        }
        return "1 = 0";
      }
      case PredicateKind::year_compare:
        if (venue) return Sql("EXISTS (SELECT 1 FROM publication p WHERE p.venue = c.id AND p.year") + op(n.comparator) + num() + ")";
        return Sql(std::string("e.year") + op(n.comparator)) + num();
      case PredicateKind::about_keyword:
        if (venue) {
          return Sql("EXISTS (SELECT 1 FROM publication p JOIN pub_keyword k ON k.pub = p.id WHERE p.venue = c.id AND "
                     "k.keyword IN " + arg(1) + ")");
        }
        return Sql("EXISTS (SELECT 1 FROM pub_keyword k WHERE k.pub = c.id AND k.keyword IN " + arg(1) + ")");
      case PredicateKind::about_terms: return terms_expr(*n.terms);
      case PredicateKind::hosts:
        return Sql("EXISTS (SELECT 1 FROM publication p WHERE p.venue = c.id AND p.id IN " + arg(1) + ")");
      case PredicateKind::keyword_of:
        return Sql("c.id IN (SELECT k.keyword FROM pub_keyword k WHERE k.pub IN " +
                   pubs_of_set(n.inputs[1], at(n.inputs[1]).entity_concept) + ")");
      case PredicateKind::appeared_in: return Sql("e.venue IN " + arg(1));
      case PredicateKind::cited_by:
      case PredicateKind::references: {
        bool cited = n.predicate == PredicateKind::cited_by;
        std::string own = cited ? "r.dst" : "r.src";
        std::string other = cited ? "r.src" : "r.dst";
        if (c == Concept::publication) {
          return Sql("EXISTS (SELECT 1 FROM reference r WHERE " + own + " = c.id AND " + other + " IN " + arg(1) + ")");
        }
        return Sql("EXISTS (SELECT 1 FROM authorship a JOIN reference r ON " + own + " = a.pub WHERE a.person = c.id AND " +
                   other + " IN " + arg(1) + ")");
      }
      case PredicateKind::edited_by:
        return Sql("EXISTS (SELECT 1 FROM editorship d WHERE d.pub = c.id AND d.person IN " + arg(1) + ")");
      case PredicateKind::written_by:
        return Sql("EXISTS (SELECT 1 FROM authorship a WHERE a.pub = c.id AND a.person IN " + arg(1) + ")");
      case PredicateKind::written_by_any: {
        std::vector<Sql> parts;
        if (n.distinct) {
          for (std::size_t i = 1; i < n.inputs.size(); ++i) {
            parts.emplace_back("CASE WHEN EXISTS (SELECT 1 FROM authorship a WHERE a.pub = c.id AND a.person IN " +
                               arg(i) + ") THEN 1 ELSE 0 END");
          }
          return Sql("(") + join(parts, " + ") + ") >= " + num();
        }
        for (std::size_t i = 1; i < n.inputs.size(); ++i) parts.emplace_back("a.person IN " + arg(i));
        return Sql("(SELECT COUNT(*) FROM authorship a WHERE a.pub = c.id AND (") + join(parts, " OR ") + ")) >= " + num();
      }
      case PredicateKind::published_with:
        return Sql("EXISTS (SELECT 1 FROM authorship a JOIN affiliation f ON f.person = a.person WHERE a.pub = c.id AND "
                   "f.institution IN " + arg(1) + ")");
      case PredicateKind::authored:
        return Sql("EXISTS (SELECT 1 FROM authorship a WHERE a.person = c.id AND a.pub IN " + arg(1) + ")");
      case PredicateKind::authored_only:
        return Sql("EXISTS (SELECT 1 FROM authorship a WHERE a.person = c.id) AND NOT EXISTS (SELECT 1 FROM authorship a "
                   "WHERE a.person = c.id AND a.pub NOT IN " + arg(1) + ")");
      case PredicateKind::authored_no:
        return Sql("NOT EXISTS (SELECT 1 FROM authorship a WHERE a.person = c.id AND a.pub IN " + arg(1) + ")");
      case PredicateKind::edited:
        return Sql("EXISTS (SELECT 1 FROM editorship d WHERE d.person = c.id AND d.pub IN " + arg(1) + ")");
      case PredicateKind::works_for:
        return Sql("EXISTS (SELECT 1 FROM affiliation f WHERE f.person = c.id AND f.institution IN " + arg(1) + ")");
      case PredicateKind::published_in:
        return Sql("EXISTS (SELECT 1 FROM authorship a JOIN publication p ON p.id = a.pub WHERE a.person = c.id AND "
                   "p.venue IN " + arg(1) + ")");
      case PredicateKind::with_members:
        return Sql("EXISTS (SELECT 1 FROM affiliation f WHERE f.institution = c.id AND f.person IN " + arg(1) + ")");
      case PredicateKind::coauthor_of:
        return Sql("EXISTS (SELECT 1 FROM authorship a JOIN authorship b ON b.pub = a.pub WHERE a.person = c.id AND "
                   "b.person <> c.id AND b.person IN " + arg(1) + ")");
      case PredicateKind::metric_compare: {
        if (n.metric == Metric::core_rank) return Sql(core_rank_expr(c) + op(n.comparator)) + num();
        std::string h = h_cte(n, c);
        joins += " LEFT JOIN " + h + " h ON h.id = c.id";
        // sum_h / years <op> n, kept in integers.
        return Sql(std::string("COALESCE(h.sum_h, 0)") + op(n.comparator)) + num() + " * COALESCE(h.years, 1)";
      }
      case PredicateKind::length_compare:
        return Sql("CHAR_LENGTH(" + text_expr(c, n.attribute) + ")" + op(n.comparator)) + num();
      case PredicateKind::count_compare: {
        std::optional<NodeId> scope;
        if (n.scoped) scope = n.inputs[1];
        return count_expr(n, c, scope) + op(n.comparator) + num();
      }
    }
    throw SqlEmitError("unsupported predicate " + std::string(predicate_kind_name(n.predicate)));
  }

  void predicate(const PlanNode& n) {
    Concept c = at(n.inputs[0]).entity_concept;
    std::string joins;
    Sql cond = condition(n, c, joins);
    cte(name(n.id), Sql("SELECT c.id, c.ord" + from_candidates(n.inputs[0], c) + joins + " WHERE ") + cond);
  }

  void set_op(const PlanNode& n) {
    std::string a = "SELECT id FROM " + name(n.inputs[0]);
    std::string b = "SELECT id FROM " + name(n.inputs[1]);
    std::string body;
    switch (n.set_op) {
      case SetOpKind::and_: body = a + " INTERSECT " + b; break;
      case SetOpKind::or_: body = a + " UNION " + b; break;
      case SetOpKind::and_not: body = a + " EXCEPT " + b; break;
      case SetOpKind::or_not:
        body = a + " UNION SELECT id FROM (SELECT id FROM " + name(n.inputs[2]) + " EXCEPT " + b + ") u";
        break;
    }
    cte(name(n.id), Sql("SELECT id, 0 AS ord FROM (" + body + ") s"));
  }

  Sql score_expr(const PlanNode& n, Concept c, std::string& joins, std::string& where) {
    switch (n.aggregate) {
      case AggregateKind::relation_count: {
        std::optional<NodeId> scope;
        if (n.scoped) scope = n.inputs[1];
        return count_expr(n, c, scope);
      }
      case AggregateKind::year: return "e.year";
      case AggregateKind::publishing_in:
        return Sql("(SELECT COUNT(*) FROM authorship a JOIN publication p ON p.id = a.pub WHERE a.person = c.id AND "
                   "p.venue IN " + ids_of(n.inputs[1]) + ")");
      case AggregateKind::researching_about:
        return Sql("(SELECT COUNT(DISTINCT x.pub) FROM " + entity_pubs(c) +
                   " x WHERE x.id = c.id AND EXISTS (SELECT 1 FROM pub_keyword k WHERE k.pub = x.pub AND k.keyword IN " +
                   ids_of(n.inputs[1]) + "))");
      case AggregateKind::keyword_frequency: {
        Concept source = at(n.inputs[1]).entity_concept;
        if (source == Concept::keyword) {
          where = " WHERE c.id IN " + ids_of(n.inputs[1]);
          return "(SELECT COUNT(*) FROM pub_keyword k WHERE k.keyword = c.id)";
        }
        return Sql("(SELECT COUNT(*) FROM pub_keyword k WHERE k.keyword = c.id AND k.pub IN " +
                   pubs_of_set(n.inputs[1], source) + ")");
      }
      case AggregateKind::related_keywords: {
        where = " WHERE c.id NOT IN " + ids_of(n.inputs[1]);
        std::string s = "(SELECT COUNT(*) FROM pub_keyword k WHERE k.keyword = c.id AND k.pub IN "
                        "(SELECT k2.pub FROM pub_keyword k2 WHERE k2.keyword IN " +
                        ids_of(n.inputs[1]) + ")";
        if (n.scoped) s += " AND k.pub IN " + ids_of(n.inputs[2]);
        return Sql(s + ")");
      }
      case AggregateKind::metric: {
        if (n.metric == Metric::core_rank) return Sql(core_rank_expr(c));
        std::string h = h_cte(n, c);
        joins += " LEFT JOIN " + h + " h ON h.id = c.id";
        return "COALESCE(CAST(h.sum_h AS DOUBLE PRECISION) / h.years, 0)";
      }
      case AggregateKind::length: return Sql("CHAR_LENGTH(" + text_expr(c, n.attribute) + ")");
    }
    throw SqlEmitError("unsupported aggregate " + std::string(aggregate_kind_name(n.aggregate)));
  }

  void aggregate(const PlanNode& n) {
    Concept c = at(n.inputs[0]).entity_concept;
    std::string joins;
    std::string where;
    Sql score = score_expr(n, c, joins, where);
    std::string s = name(n.id) + "_s";
    Sql body = Sql("SELECT id, score FROM (SELECT c.id AS id, ") + score + " AS score" + from_candidates(n.inputs[0], c) +
               joins + where + ") t";
    if (n.min_score > 0) body += Sql(" WHERE t.score >= ") + param(n.min_score);
    cte(s, body);
    const char* dir = n.direction == Direction::descending ? " DESC" : " ASC";
    Sql ranked = Sql("SELECT id, ROW_NUMBER() OVER (ORDER BY score") + dir + ", id) AS ord FROM ";
    if (n.rank) {
      ranked += Sql("(SELECT id, score, RANK() OVER (ORDER BY score") + dir + ") AS rnk FROM " + s +
                ") r WHERE rnk <= " + param(static_cast<std::int64_t>(*n.rank));
    } else {
      ranked += s;
    }
    cte(name(n.id), ranked);
  }

  void truncate(const PlanNode& n) {
    const PlanNode& in = at(n.inputs[0]);
    Sql limit = param(static_cast<std::int64_t>(n.limit));
    if (in.result == ResultKind::table) {
      columns_[n.id] = columns_[in.id];
      std::vector<Sql> cols;
      for (std::size_t i = 0; i < columns_[n.id].size(); ++i) cols.emplace_back("col" + std::to_string(i));
      cte(name(n.id), Sql("SELECT ") + join(cols, ", ") + ", ord FROM " + name(in.id) + " WHERE ord <= " + limit);
      return;
    }
    cte(name(n.id), Sql("SELECT id, ord FROM (SELECT id, ord, ROW_NUMBER() OVER (ORDER BY ord, id) AS rn FROM " +
                        name(in.id) + ") t WHERE rn <= ") + limit);
  }

  /// Projected attribute; NULL where the record has no value.
  static std::string attribute_expr(Concept c, const std::string& attr) {
    if (attr == "dblp_key" || c == Concept::keyword) return "c.id";
    switch (c) {
      case Concept::conference:
      case Concept::journal: return attr == "acronym" ? "e.acronym" : "e.name";
      case Concept::publication:
        if (attr == "title" || attr == "abstract" || attr == "year" || attr == "doi" || attr == "isbn") return "e." + attr;
        return "e.volume";
      case Concept::person: return attr == "orcid" ? "e.orcid" : "e.name";
      case Concept::institution: return attr == "city" || attr == "country" ? "e." + attr : "e.name";
      case Concept::keyword: break;
    }
    return "c.id";
  }

  void project(const PlanNode& n) {
    Concept c = at(n.inputs[0]).entity_concept;
    columns_[n.id] = n.attributes;
    std::vector<Sql> cols;
    for (std::size_t i = 0; i < n.attributes.size(); ++i) {
      std::string e = attribute_expr(c, n.attributes[i]);
      if (e != "c.id" && e != "e.year") e = "COALESCE(" + e + ", '')";
      cols.emplace_back(e + " AS col" + std::to_string(i));
    }
    cte(name(n.id), Sql("SELECT ") + join(cols, ", ") + ", ROW_NUMBER() OVER (ORDER BY c.ord, c.id) AS ord" +
                        from_candidates(n.inputs[0], c));
  }

  void function(const PlanNode& n) {
    const PlanNode& in = at(n.inputs[0]);
    switch (n.function) {
      case FunctionNodeKind::core_ranks: {
        columns_[n.id] = {"core_rank", "count"};
        std::string pubs = "p.id IN " + pubs_of_set(in.id, in.entity_concept);
        if (n.scoped) pubs += " AND p.id IN " + pubs_of_set(n.inputs[1], at(n.inputs[1]).entity_concept);
        cte(name(n.id), Sql("SELECT r.grade AS col0, COUNT(*) AS col1, ROW_NUMBER() OVER (ORDER BY r.ordinal DESC) AS ord "
                            "FROM publication p JOIN core_rank r ON r.venue = p.venue WHERE " +
                            pubs + " GROUP BY r.grade, r.ordinal"));
        return;
      }
      case FunctionNodeKind::alternative_names: {
        columns_[n.id] = {"dblp_key", "alternative_name"};
        std::string kind;
        switch (in.entity_concept) {
          case Concept::conference:
          case Concept::journal: kind = "venue"; break;
          case Concept::person: kind = "person"; break;
          case Concept::institution: kind = "institution"; break;
          default: break;
        }
        Sql body("SELECT al.entity AS col0, al.alias AS col1, ROW_NUMBER() OVER (ORDER BY al.entity, al.alias) AS ord "
                 "FROM alias al WHERE ");
        if (kind.empty()) {
          body += "1 = 0";
        } else {
          body += Sql("al.kind = ") + param(kind) + " AND al.entity IN " + ids_of(in.id);
        }
        cte(name(n.id), body);
        return;
      }
      case FunctionNodeKind::most_frequent: {
        const std::string& attr = n.attributes.front();
        columns_[n.id] = {attr, "count"};
        std::string g = name(n.id) + "_g";
        std::string v = attribute_expr(in.entity_concept, attr);
        cte(g, Sql("SELECT " + v + " AS v, COUNT(*) AS cnt" + from_candidates(in.id, in.entity_concept) + " WHERE " + v +
                   " IS NOT NULL GROUP BY " + v));
        cte(name(n.id), Sql("SELECT v AS col0, cnt AS col1, ROW_NUMBER() OVER (ORDER BY v) AS ord FROM " + g +
                            " WHERE cnt = (SELECT MAX(cnt) FROM " + g + ")"));
        return;
      }
    }
    throw SqlEmitError("unsupported function " + std::string(function_node_kind_name(n.function)));
  }

  const LogicalPlan& plan_;
  const Corpus& corpus_;
  std::vector<Sql> ctes_;
  std::map<NodeId, std::vector<std::string>> columns_;
};

}  // namespace

SqlArtifact emit(const LogicalPlan& plan, const Corpus& corpus) { return Emitter(plan, corpus).run(); }

namespace {

/// One INSERT; absent optional values become NULL literals.
class Insert {
 public:
  explicit Insert(std::string table) : table_(std::move(table)) {}

  Insert& operator()(Cell v) {
    values_.emplace_back("?");
    a_.parameters.push_back(std::move(v));
    return *this;
  }
  Insert& operator()(const std::string& v) { return (*this)(Cell(v)); }
  Insert& operator()(std::int64_t v) { return (*this)(Cell(v)); }
  Insert& operator()(const std::optional<std::string>& v) {
    if (!v) {
      values_.emplace_back("NULL");
      return *this;
    }
    return (*this)(Cell(*v));
  }

  SqlArtifact done() {
    a_.statement = "INSERT INTO " + table_ + " VALUES (";
    for (std::size_t i = 0; i < values_.size(); ++i) a_.statement += (i ? ", " : "") + values_[i];
    a_.statement += ")";
    a_.result = ResultKind::scalar;
    return std::move(a_);
  }

 private:
  std::string table_;
  std::vector<std::string> values_;
  SqlArtifact a_;
};

std::string str(std::string_view s) { return std::string(s); }

}  // namespace

std::vector<SqlArtifact> emit_inserts(const Corpus& corpus) {
  std::vector<SqlArtifact> out;
  auto venues = corpus.venues();
  auto persons = corpus.persons();
  auto institutions = corpus.institutions();
  auto pubs = corpus.publications();
  for (const auto& v : venues) {
    out.push_back(Insert("venue")(v.dblp_key)(str(v.kind == VenueKind::conference ? "conference" : "journal"))(v.name)(
                      v.acronym)
                      .done());
  }
  for (const auto& v : venues) {
    if (!v.core_rank) continue;
    out.push_back(Insert("core_rank")(v.dblp_key)(str(core_rank_name(*v.core_rank)))(
                      static_cast<std::int64_t>(core_rank_ordinal(v.core_rank)))
                      .done());
  }
  for (const auto& i : institutions) out.push_back(Insert("institution")(i.dblp_key)(i.name)(i.city)(i.country).done());
  for (const auto& p : persons) out.push_back(Insert("person")(p.dblp_key)(p.orcid)(p.primary_name).done());
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    const auto& p = pubs[i];
    auto venue = corpus.venue_of(static_cast<EntityIndex>(i));
    std::optional<std::string> venue_key;
    if (venue) venue_key = venues[*venue].dblp_key;
    out.push_back(Insert("publication")(p.dblp_key)(p.doi)(p.isbn)(p.title)(p.abstract_text)(p.year)(
                      str(pub_type_name(p.pub_type)))(venue_key)(p.volume)
                      .done());
  }
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    auto pub = static_cast<EntityIndex>(i);
    const auto& key = pubs[i].dblp_key;
    const auto& authors = corpus.authors_of(pub);
    for (std::size_t k = 0; k < authors.size(); ++k) {
      out.push_back(Insert("authorship")(key)(persons[authors[k]].dblp_key)(static_cast<std::int64_t>(k + 1)).done());
    }
    for (auto e : corpus.editors_of(pub)) out.push_back(Insert("editorship")(key)(persons[e].dblp_key).done());
    for (auto r : corpus.references_of(pub)) out.push_back(Insert("reference")(key)(pubs[r].dblp_key).done());
    for (auto k : corpus.keywords_of(pub)) out.push_back(Insert("pub_keyword")(key)(str(corpus.keywords()[k])).done());
    auto tokens = word_tokens(searchable_text(pubs[i]));
    std::set<std::string> terms(tokens.begin(), tokens.end());
    for (const auto& t : terms) out.push_back(Insert("pub_term")(key)(t).done());
  }
  for (std::size_t i = 0; i < persons.size(); ++i) {
    for (auto inst : corpus.affiliations_of(static_cast<EntityIndex>(i))) {
      out.push_back(Insert("affiliation")(persons[i].dblp_key)(institutions[inst].dblp_key).done());
    }
  }
  auto aliases = [&](const char* kind, const std::string& key, const std::vector<std::string>& names) {
    std::set<std::string> unique(names.begin(), names.end());
    for (const auto& a : unique) out.push_back(Insert("alias")(str(kind))(key)(a).done());
  };
  for (const auto& v : venues) aliases("venue", v.dblp_key, v.aliases);
  for (const auto& p : persons) aliases("person", p.dblp_key, p.aliases);
  for (const auto& i : institutions) aliases("institution", i.dblp_key, i.aliases);
  return out;
}

}  // namespace schenql
