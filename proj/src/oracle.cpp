// Naive reference evaluator. Works on dblp keys and raw record fields only;
// every relation is recomputed by scanning the record lists.

#include <algorithm>
#include <map>
#include <set>

#include "schenql/evaluator.hpp"
#include "schenql/metrics.hpp"
#include "schenql/text_match.hpp"

namespace schenql {
namespace {

using Keys = std::set<std::string>;

struct Value {
  ResultKind kind = ResultKind::entities;
  Concept concept_kind = Concept::publication;
  std::vector<std::string> keys;  // result order
  std::int64_t scalar = 0;
  Table table;
};

std::int64_t brute_h(const std::vector<std::int64_t>& counts) {
  std::int64_t best = 0;
  for (std::int64_t h = 0; h <= static_cast<std::int64_t>(counts.size()); ++h) {
    auto at_least = std::count_if(counts.begin(), counts.end(), [h](std::int64_t c) { return c >= h; });
    if (at_least >= h) best = h;
  }
  return best;
}

bool holds(std::int64_t v, Comparator c, std::int64_t n) {
  if (c == Comparator::eq) return v == n;
  if (c == Comparator::at_least) return v >= n;
  if (c == Comparator::at_most) return v <= n;
  if (c == Comparator::more_than) return v > n;
  return v < n;
}

bool holds(const Rational& v, Comparator c, std::int64_t n) {
  // v = a/b with b > 0, so v op n  <=>  a op n*b.
  return holds(v.numerator(), c, n * v.denominator());
}

std::vector<std::string> words_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char ch : text) {
    bool word = ch >= 0x80 || (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
    if (word) {
      cur += static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch);
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool term_holds(const TermExpr& e, const std::vector<std::string>& words) {
  if (const auto* w = std::get_if<TermExpr::Word>(&e.node)) {
    return std::find(words.begin(), words.end(), w->token) != words.end();
  }
  if (const auto* a = std::get_if<TermExpr::And>(&e.node)) {
    for (const auto& c : a->children) {
      if (!term_holds(c, words)) return false;
    }
    return true;
  }
  for (const auto& c : std::get<TermExpr::Or>(e.node).children) {
    if (term_holds(c, words)) return true;
  }
  return false;
}

class Oracle {
 public:
  Oracle(const LogicalPlan& plan, const Corpus& corpus) : plan_(plan), corpus_(corpus) {}

  ResultSet run() {
    Value v = eval(plan_.output);
    ResultSet out;
    out.kind = v.kind;
    out.scalar = v.scalar;
    out.table = v.table;
    if (v.kind == ResultKind::entities) {
      out.entity_concept = v.concept_kind;
      for (const auto& k : v.keys) out.ids.push_back(position(v.concept_kind, k));
    }
    return out;
  }

 private:
  // Record access by key.

  const Publication* pub(const std::string& key) const {
    for (const auto& p : corpus_.publications()) {
      if (p.dblp_key == key) return &p;
    }
    return nullptr;
  }
  const Person* person(const std::string& key) const {
    for (const auto& p : corpus_.persons()) {
      if (p.dblp_key == key) return &p;
    }
    return nullptr;
  }
  const Venue* venue(const std::string& key) const {
    for (const auto& v : corpus_.venues()) {
      if (v.dblp_key == key) return &v;
    }
    return nullptr;
  }
  const Institution* institution(const std::string& key) const {
    for (const auto& i : corpus_.institutions()) {
      if (i.dblp_key == key) return &i;
    }
    return nullptr;
  }

  Keys all_keywords() const {
    Keys out;
    for (const auto& p : corpus_.publications()) out.insert(p.keywords.begin(), p.keywords.end());
    return out;
  }

  std::vector<std::string> all_keys(Concept c) const {
    std::vector<std::string> out;
    switch (c) {
      case Concept::conference:
      case Concept::journal:
        for (const auto& v : corpus_.venues()) {
          if ((v.kind == VenueKind::conference) == (c == Concept::conference)) out.push_back(v.dblp_key);
        }
        break;
      case Concept::keyword: {
        Keys k = all_keywords();
        out.assign(k.begin(), k.end());
        break;
      }
      case Concept::publication:
        for (const auto& p : corpus_.publications()) out.push_back(p.dblp_key);
        break;
      case Concept::person:
        for (const auto& p : corpus_.persons()) out.push_back(p.dblp_key);
        break;
      case Concept::institution:
        for (const auto& i : corpus_.institutions()) out.push_back(i.dblp_key);
        break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  EntityIndex position(Concept c, const std::string& key) const {
    if (c == Concept::keyword) {
      Keys k = all_keywords();
      return static_cast<EntityIndex>(std::distance(k.begin(), k.find(key)));
    }
    std::size_t n = 0;
    auto find_in = [&](const auto& records) {
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].dblp_key == key) return i;
      }
      return records.size();
    };
    switch (c) {
      case Concept::conference:
      case Concept::journal: n = find_in(corpus_.venues()); break;
      case Concept::publication: n = find_in(corpus_.publications()); break;
      case Concept::person: n = find_in(corpus_.persons()); break;
      case Concept::institution: n = find_in(corpus_.institutions()); break;
      case Concept::keyword: break;
    }
    return static_cast<EntityIndex>(n);
  }

  // Relations recomputed from raw lists; unknown keys are dropped.

  std::vector<const Publication*> authored(const std::string& person_key) const {
    std::vector<const Publication*> out;
    for (const auto& p : corpus_.publications()) {
      if (std::find(p.author_keys.begin(), p.author_keys.end(), person_key) != p.author_keys.end()) out.push_back(&p);
    }
    return out;
  }

  Keys authors(const Publication& p) const {
    Keys out;
    for (const auto& a : p.author_keys) {
      if (person(a)) out.insert(a);
    }
    return out;
  }

  Keys editors(const Publication& p) const {
    Keys out;
    for (const auto& a : p.editor_keys) {
      if (person(a)) out.insert(a);
    }
    return out;
  }

  Keys references(const Publication& p) const {
    Keys out;
    for (const auto& r : p.reference_keys) {
      if (pub(r)) out.insert(r);
    }
    return out;
  }

  Keys citers(const std::string& pub_key) const {
    Keys out;
    for (const auto& q : corpus_.publications()) {
      if (std::find(q.reference_keys.begin(), q.reference_keys.end(), pub_key) != q.reference_keys.end()) {
        out.insert(q.dblp_key);
      }
    }
    return out;
  }

  Keys affiliations(const Person& p) const {
    Keys out;
    for (const auto& i : p.affiliation_keys) {
      if (institution(i)) out.insert(i);
    }
    return out;
  }

  Keys members(const std::string& inst_key) const {
    Keys out;
    for (const auto& p : corpus_.persons()) {
      if (affiliations(p).count(inst_key)) out.insert(p.dblp_key);
    }
    return out;
  }

  std::optional<std::string> venue_key(const Publication& p) const {
    if (p.venue_key && venue(*p.venue_key)) return p.venue_key;
    return std::nullopt;
  }

  /// Publications standing for an entity.
  Keys pubs_of(Concept c, const std::string& key) const {
    Keys out;
    for (const auto& p : corpus_.publications()) {
      bool hit = false;
      switch (c) {
        case Concept::publication: hit = p.dblp_key == key; break;
        case Concept::conference:
        case Concept::journal: hit = venue_key(p) == key; break;
        case Concept::person: hit = authors(p).count(key) > 0; break;
        case Concept::institution:
          for (const auto& a : authors(p)) hit = hit || affiliations(*person(a)).count(key) > 0;
          break;
        case Concept::keyword:
          hit = std::find(p.keywords.begin(), p.keywords.end(), key) != p.keywords.end();
          break;
      }
      if (hit) out.insert(p.dblp_key);
    }
    return out;
  }

  Keys pubs_of(const Value& v) const {
    Keys out;
    for (const auto& k : v.keys) {
      Keys p = pubs_of(v.concept_kind, k);
      out.insert(p.begin(), p.end());
    }
    return out;
  }

  static bool meets(const Keys& a, const Keys& b) {
    return std::any_of(a.begin(), a.end(), [&](const std::string& x) { return b.count(x) > 0; });
  }

  static Keys as_set(const Value& v) { return {v.keys.begin(), v.keys.end()}; }

  Keys keywords(const Publication& p) const { return {p.keywords.begin(), p.keywords.end()}; }

  int rank_of(Concept c, const std::string& key) const {
    auto venue_rank = [&](const std::string& vk) {
      const Venue* v = venue(vk);
      return v && v->core_rank ? static_cast<int>(*v->core_rank) : 0;
    };
    if (c == Concept::conference || c == Concept::journal) return venue_rank(key);
    if (c == Concept::publication) {
      auto vk = venue_key(*pub(key));
      return vk ? venue_rank(*vk) : 0;
    }
    if (c == Concept::person || c == Concept::institution) {
      int best = 0;
      for (const auto& pk : pubs_of(c, key)) best = std::max(best, rank_of(Concept::publication, pk));
      return best;
    }
    return 0;
  }

  Rational h_avg_of(Concept c, const std::string& key) const {
    std::map<std::int64_t, std::vector<std::int64_t>> years;
    for (const auto& pk : pubs_of(c, key)) {
      years[pub(pk)->year].push_back(static_cast<std::int64_t>(citers(pk).size()));
    }
    if (years.empty()) return Rational(0);
    std::int64_t sum = 0;
    for (const auto& [y, counts] : years) sum += brute_h(counts);
    return Rational(sum, static_cast<std::int64_t>(years.size()));
  }

  Rational metric_of(Concept c, const std::string& key, Metric m) const {
    return m == Metric::core_rank ? Rational(rank_of(c, key)) : h_avg_of(c, key);
  }

  std::string text_of(Concept c, const std::string& key, TextAttribute a) const {
    switch (c) {
      case Concept::conference:
      case Concept::journal: return a == TextAttribute::acronym ? venue(key)->acronym : venue(key)->name;
      case Concept::publication: {
        const Publication* p = pub(key);
        if (a == TextAttribute::title) return p->title;
        return p->abstract_text ? *p->abstract_text : "";
      }
      case Concept::person: return person(key)->primary_name;
      case Concept::institution: {
        const Institution* i = institution(key);
        if (a != TextAttribute::location) return i->name;
        std::vector<std::string> parts;
        if (i->city) parts.push_back(*i->city);
        if (i->country) parts.push_back(*i->country);
        return parts.size() == 2 ? parts[0] + ", " + parts[1] : parts.empty() ? "" : parts[0];
      }
      case Concept::keyword: return key;
    }
    return "";
  }

  std::int64_t count_relation(Concept c, const std::string& key, Relation r, const Keys* scope) const {
    auto in_scope = [&](const std::string& k) { return !scope || scope->count(k) > 0; };
    if (r == Relation::coauthors) {
      Keys co;
      for (const auto* p : authored(key)) {
        if (!in_scope(p->dblp_key)) continue;
        for (const auto& a : authors(*p)) {
          if (a != key) co.insert(a);
        }
      }
      return static_cast<std::int64_t>(co.size());
    }
    auto edges = [&](const Publication& p) {
      Keys e = r == Relation::references ? references(p) : citers(p.dblp_key);
      return std::count_if(e.begin(), e.end(), in_scope);
    };
    if (c == Concept::publication) return edges(*pub(key));
    std::int64_t total = 0;
    for (const auto* p : authored(key)) total += edges(*p);
    return total;
  }

  std::optional<Cell> attr_of(Concept c, const std::string& key, const std::string& attr) const {
    auto opt = [](const std::optional<std::string>& s) -> std::optional<Cell> {
      return s ? std::optional<Cell>(Cell(*s)) : std::nullopt;
    };
    if (attr == "dblp_key") return Cell(key);
    if (c == Concept::keyword) return Cell(key);
    if (c == Concept::publication) {
      const Publication* p = pub(key);
      if (attr == "title") return Cell(p->title);
      if (attr == "abstract") return opt(p->abstract_text);
      if (attr == "year") return Cell(p->year);
      if (attr == "doi") return opt(p->doi);
      if (attr == "isbn") return opt(p->isbn);
      if (attr == "volume") return opt(p->volume);
    }
    if (c == Concept::person) {
      const Person* p = person(key);
      if (attr == "name") return Cell(p->primary_name);
      if (attr == "orcid") return opt(p->orcid);
    }
    if (c == Concept::conference || c == Concept::journal) {
      const Venue* v = venue(key);
      if (attr == "name") return Cell(v->name);
      if (attr == "acronym") return Cell(v->acronym);
    }
    if (c == Concept::institution) {
      const Institution* i = institution(key);
      if (attr == "name") return Cell(i->name);
      if (attr == "city") return opt(i->city);
      if (attr == "country") return opt(i->country);
    }
    return std::nullopt;
  }

  bool test(const PlanNode& n, Concept c, const std::string& key, const std::vector<Value>& args) const {
    auto arg = [&](std::size_t i) { return as_set(args.at(i)); };
    auto venue_pubs = [&]() {
      std::vector<const Publication*> out;
      for (const auto& p : corpus_.publications()) {
        if (venue_key(p) == key) out.push_back(&p);
      }
      return out;
    };
    switch (n.predicate) {
      case PredicateKind::member_of: return arg(0).count(key) > 0;
      case PredicateKind::attribute_equals: {
        const std::string& t = n.text;
        auto same = [&](const std::optional<std::string>& v) { return v.has_value() && *v == t; };
        auto same_ci = [&](const std::optional<std::string>& v) {
          return v.has_value() && ascii_lower(*v) == ascii_lower(t);
        };
        if (n.field == Field::dblp_key) return key == t;
        if (c == Concept::publication) {
          const Publication* p = pub(key);
          if (n.field == Field::doi) return same(p->doi);
          if (n.field == Field::isbn) return same(p->isbn);
          if (n.field == Field::volume) return same(p->volume);
        }
        if (c == Concept::person && n.field == Field::orcid) return same(person(key)->orcid);
        if (c == Concept::conference || c == Concept::journal) {
          if (n.field == Field::acronym) return same_ci(venue(key)->acronym);
          if (n.field == Field::volume) {
            for (const auto* p : venue_pubs()) {
              if (same(p->volume)) return true;
            }
          }
        }
        if (c == Concept::institution) {
          if (n.field == Field::city) return same_ci(institution(key)->city);
          if (n.field == Field::country) return same_ci(institution(key)->country);
        }
        return false;
      }
      case PredicateKind::year_compare:
        if (c == Concept::publication) return holds(pub(key)->year, n.comparator, n.number);
        for (const auto* p : venue_pubs()) {
          if (holds(p->year, n.comparator, n.number)) return true;
        }
        return false;
      case PredicateKind::about_keyword:
        if (c == Concept::publication) return meets(keywords(*pub(key)), arg(0));
        for (const auto* p : venue_pubs()) {
          if (meets(keywords(*p), arg(0))) return true;
        }
        return false;
      case PredicateKind::about_terms: {
        const Publication* p = pub(key);
        std::string text = p->title + " " + (p->abstract_text ? *p->abstract_text : "");
        return term_holds(*n.terms, words_of(text));
      }
      case PredicateKind::hosts: {
        for (const auto* p : venue_pubs()) {
          if (arg(0).count(p->dblp_key)) return true;
        }
        return false;
      }
      case PredicateKind::keyword_of: {
        for (const auto& pk : pubs_of(args.at(0))) {
          if (keywords(*pub(pk)).count(key)) return true;
        }
        return false;
      }
      case PredicateKind::appeared_in: {
        auto vk = venue_key(*pub(key));
        return vk && arg(0).count(*vk);
      }
      case PredicateKind::cited_by:
      case PredicateKind::references: {
        Keys targets = arg(0);
        Keys mine = c == Concept::publication ? Keys{key} : pubs_of(Concept::person, key);
        for (const auto& m : mine) {
          if (n.predicate == PredicateKind::cited_by) {
            if (meets(citers(m), targets)) return true;
          } else if (meets(references(*pub(m)), targets)) {
            return true;
          }
        }
        return false;
      }
      case PredicateKind::edited_by: return meets(editors(*pub(key)), arg(0));
      case PredicateKind::written_by: return meets(authors(*pub(key)), arg(0));
      case PredicateKind::written_by_any: {
        Keys as = authors(*pub(key));
        std::int64_t hits = 0;
        if (n.distinct) {
          for (std::size_t i = 0; i < args.size(); ++i) hits += meets(as, arg(i)) ? 1 : 0;
        } else {
          Keys all;
          for (std::size_t i = 0; i < args.size(); ++i) {
            Keys s = arg(i);
            all.insert(s.begin(), s.end());
          }
          for (const auto& a : as) hits += all.count(a) ? 1 : 0;
        }
        return hits >= n.number;
      }
      case PredicateKind::published_with: {
        for (const auto& a : authors(*pub(key))) {
          if (meets(affiliations(*person(a)), arg(0))) return true;
        }
        return false;
      }
      case PredicateKind::authored:
      case PredicateKind::authored_only:
      case PredicateKind::authored_no: {
        Keys mine = pubs_of(Concept::person, key);
        Keys s = arg(0);
        if (n.predicate == PredicateKind::authored) return meets(mine, s);
        if (n.predicate == PredicateKind::authored_no) return !meets(mine, s);
        return !mine.empty() && std::includes(s.begin(), s.end(), mine.begin(), mine.end());
      }
      case PredicateKind::edited: {
        Keys s = arg(0);
        for (const auto& p : corpus_.publications()) {
          if (s.count(p.dblp_key) && editors(p).count(key)) return true;
        }
        return false;
      }
      case PredicateKind::works_for: return meets(affiliations(*person(key)), arg(0));
      case PredicateKind::published_in: {
        Keys s = arg(0);
        for (const auto* p : authored(key)) {
          auto vk = venue_key(*p);
          if (vk && s.count(*vk)) return true;
        }
        return false;
      }
      case PredicateKind::with_members: return meets(members(key), arg(0));
      case PredicateKind::coauthor_of: {
        Keys s = arg(0);
        for (const auto& p : corpus_.publications()) {
          Keys as = authors(p);
          if (!as.count(key)) continue;
          for (const auto& a : as) {
            if (a != key && s.count(a)) return true;
          }
        }
        return false;
      }
      case PredicateKind::metric_compare: return holds(metric_of(c, key, n.metric), n.comparator, n.number);
      case PredicateKind::length_compare:
        return holds(static_cast<std::int64_t>(utf8_length(text_of(c, key, n.attribute))), n.comparator, n.number);
      case PredicateKind::count_compare: {
        Keys scope;
        if (n.scoped) scope = arg(0);
        return holds(count_relation(c, key, n.relation, n.scoped ? &scope : nullptr), n.comparator, n.number);
      }
    }
    return false;
  }

  /// Scores each candidate; nullopt drops it.
  std::optional<Rational> score(const PlanNode& n, Concept c, const std::string& key,
                                const std::vector<Value>& args) const {
    switch (n.aggregate) {
      case AggregateKind::relation_count: {
        Keys scope;
        if (n.scoped) scope = as_set(args.at(0));
        return Rational(count_relation(c, key, n.relation, n.scoped ? &scope : nullptr));
      }
      case AggregateKind::year: return Rational(pub(key)->year);
      case AggregateKind::publishing_in: {
        Keys venues = as_set(args.at(0));
        std::int64_t k = 0;
        for (const auto* p : authored(key)) {
          auto vk = venue_key(*p);
          if (vk && venues.count(*vk)) ++k;
        }
        return Rational(k);
      }
      case AggregateKind::researching_about: {
        Keys topics = as_set(args.at(0));
        std::int64_t k = 0;
        for (const auto& pk : pubs_of(c, key)) k += meets(keywords(*pub(pk)), topics) ? 1 : 0;
        return Rational(k);
      }
      case AggregateKind::keyword_frequency: {
        const Value& source = args.at(0);
        if (source.concept_kind == Concept::keyword) {
          if (!as_set(source).count(key)) return std::nullopt;
          return Rational(static_cast<std::int64_t>(pubs_of(Concept::keyword, key).size()));
        }
        std::int64_t k = 0;
        for (const auto& pk : pubs_of(source)) k += keywords(*pub(pk)).count(key) ? 1 : 0;
        return Rational(k);
      }
      case AggregateKind::related_keywords: {
        Keys seeds = as_set(args.at(0));
        if (seeds.count(key)) return std::nullopt;
        std::int64_t k = 0;
        for (const auto& p : corpus_.publications()) {
          if (n.scoped && !as_set(args.at(1)).count(p.dblp_key)) continue;
          Keys kw = keywords(p);
          if (kw.count(key) && meets(kw, seeds)) ++k;
        }
        return Rational(k);
      }
      case AggregateKind::metric: return metric_of(c, key, n.metric);
      case AggregateKind::length: return Rational(static_cast<std::int64_t>(utf8_length(text_of(c, key, n.attribute))));
    }
    return std::nullopt;
  }

  Value eval(NodeId id) {
    const PlanNode& n = plan_.nodes.at(id);
    std::vector<Value> inputs;
    for (NodeId in : n.inputs) inputs.push_back(eval(in));
    Value out;
    out.concept_kind = n.entity_concept;
    switch (n.kind) {
      case NodeKind::scan:
        for (const auto& k : all_keys(n.entity_concept)) {
          bool keep = true;
          if (n.specialisation == Specialisation::author) keep = !authored(k).empty();
          if (n.specialisation == Specialisation::editor) {
            keep = false;
            for (const auto& p : corpus_.publications()) keep = keep || editors(p).count(k) > 0;
          }
          if (n.specialisation != Specialisation::none && n.specialisation != Specialisation::author &&
              n.specialisation != Specialisation::editor) {
            keep = std::string(pub_type_name(pub(k)->pub_type)) == std::string(specialisation_name(n.specialisation));
          }
          if (keep) out.keys.push_back(k);
        }
        return out;
      case NodeKind::constant:
        for (auto i : n.ids) out.keys.emplace_back(corpus_.key_of(n.entity_concept, i));
        return out;
      case NodeKind::predicate: {
        std::vector<Value> args(inputs.begin() + 1, inputs.end());
        out.concept_kind = inputs[0].concept_kind;
        for (const auto& k : inputs[0].keys) {
          if (test(n, out.concept_kind, k, args)) out.keys.push_back(k);
        }
        return out;
      }
      case NodeKind::set_op: {
        Keys a = as_set(inputs[0]);
        Keys b = as_set(inputs[1]);
        Keys r;
        for (const auto& k : all_keys(n.entity_concept)) {
          bool in_a = a.count(k) > 0;
          bool in_b = b.count(k) > 0;
          bool keep = false;
          switch (n.set_op) {
            case SetOpKind::and_: keep = in_a && in_b; break;
            case SetOpKind::or_: keep = in_a || in_b; break;
            case SetOpKind::and_not: keep = in_a && !in_b; break;
            case SetOpKind::or_not: keep = in_a || (as_set(inputs[2]).count(k) > 0 && !in_b); break;
          }
          if (keep) out.keys.push_back(k);
        }
        return out;
      }
      case NodeKind::aggregate: {
        std::vector<Value> args(inputs.begin() + 1, inputs.end());
        out.concept_kind = inputs[0].concept_kind;
        std::vector<std::pair<std::string, Rational>> scored;
        for (const auto& k : inputs[0].keys) {
          auto s = score(n, out.concept_kind, k, args);
          if (s && !(*s < Rational(n.min_score))) scored.emplace_back(k, *s);
        }
        auto better = [&](const Rational& x, const Rational& y) {
          return n.direction == Direction::descending ? y < x : x < y;
        };
        std::vector<std::pair<std::string, Rational>> kept;
        for (const auto& [k, s] : scored) {
          std::uint64_t rank = 1;
          for (const auto& other : scored) rank += better(other.second, s) ? 1 : 0;
          if (!n.rank || rank <= *n.rank) kept.emplace_back(k, s);
        }
        std::sort(kept.begin(), kept.end(), [&](const auto& x, const auto& y) {
          if (x.second != y.second) return better(x.second, y.second);
          return x.first < y.first;
        });
        for (const auto& [k, s] : kept) out.keys.push_back(k);
        return out;
      }
      case NodeKind::truncate:
        out = inputs[0];
        while (out.keys.size() > n.limit) out.keys.pop_back();
        while (out.table.rows.size() > n.limit) out.table.rows.pop_back();
        return out;
      case NodeKind::project:
        out.kind = ResultKind::table;
        out.table.columns = n.attributes;
        for (const auto& k : inputs[0].keys) {
          std::vector<Cell> row;
          for (const auto& a : n.attributes) {
            auto v = attr_of(inputs[0].concept_kind, k, a);
            row.push_back(v ? *v : Cell(std::string()));
          }
          out.table.rows.push_back(row);
        }
        return out;
      case NodeKind::count:
        out.kind = ResultKind::scalar;
        if (inputs[0].kind == ResultKind::entities) out.scalar = static_cast<std::int64_t>(inputs[0].keys.size());
        if (inputs[0].kind == ResultKind::table) out.scalar = static_cast<std::int64_t>(inputs[0].table.rows.size());
        if (inputs[0].kind == ResultKind::scalar) out.scalar = 1;
        return out;
      case NodeKind::function: return function(n, inputs);
    }
    return out;
  }

  Value function(const PlanNode& n, const std::vector<Value>& inputs) const {
    Value out;
    out.kind = ResultKind::table;
    const Value& in = inputs[0];
    if (n.function == FunctionNodeKind::core_ranks) {
      out.table.columns = {"core_rank", "count"};
      Keys pubs = pubs_of(in);
      if (n.scoped) {
        Keys scope = pubs_of(inputs[1]);
        Keys both;
        for (const auto& p : pubs) {
          if (scope.count(p)) both.insert(p);
        }
        pubs = both;
      }
      for (int r = 4; r >= 1; --r) {
        std::int64_t k = 0;
        for (const auto& p : pubs) k += rank_of(Concept::publication, p) == r ? 1 : 0;
        if (k > 0) out.table.rows.push_back({Cell(std::string(core_rank_name(static_cast<CoreRank>(r)))), Cell(k)});
      }
      return out;
    }
    if (n.function == FunctionNodeKind::alternative_names) {
      out.table.columns = {"dblp_key", "alternative_name"};
      std::vector<std::pair<std::string, std::string>> rows;
      for (const auto& k : in.keys) {
        std::vector<std::string> aliases;
        if (in.concept_kind == Concept::person) aliases = person(k)->aliases;
        if (in.concept_kind == Concept::institution) aliases = institution(k)->aliases;
        if (in.concept_kind == Concept::conference || in.concept_kind == Concept::journal) aliases = venue(k)->aliases;
        for (const auto& a : aliases) rows.emplace_back(k, a);
      }
      std::sort(rows.begin(), rows.end());
      rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
      for (const auto& [k, a] : rows) out.table.rows.push_back({Cell(k), Cell(a)});
      return out;
    }
    const std::string& attr = n.attributes.front();
    out.table.columns = {attr, "count"};
    std::vector<Cell> values;
    for (const auto& k : in.keys) {
      if (auto v = attr_of(in.concept_kind, k, attr)) values.push_back(*v);
    }
    std::int64_t best = 0;
    for (const auto& v : values) best = std::max<std::int64_t>(best, std::count(values.begin(), values.end(), v));
    std::vector<Cell> modal;
    for (const auto& v : values) {
      if (std::count(values.begin(), values.end(), v) == best &&
          std::find(modal.begin(), modal.end(), v) == modal.end()) {
        modal.push_back(v);
      }
    }
    std::sort(modal.begin(), modal.end());
    for (const auto& v : modal) out.table.rows.push_back({v, Cell(best)});
    return out;
  }

  const LogicalPlan& plan_;
  const Corpus& corpus_;
};

}  // namespace

ResultSet oracle_evaluate(const LogicalPlan& plan, const Corpus& corpus) {
  auto problems = validate(plan);
  if (!problems.empty()) throw QueryError(problems.front());
  return Oracle(plan, corpus).run();
}

}  // namespace schenql
