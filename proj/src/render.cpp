#include <array>

#include "schenql/ast.hpp"
#include "schenql/parser.hpp"

namespace schenql {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view concept_word(Concept c, Specialisation s) {
  switch (s) {
    case Specialisation::book: return "BOOKS";
    case Specialisation::article: return "ARTICLES";
    case Specialisation::phdthesis: return "PHDTHESISS";
    case Specialisation::masterthesis: return "MASTERTHESISS";
    case Specialisation::inproceeding: return "INPROCEEDINGS";
    case Specialisation::incollection: return "INCOLLECTIONS";
    case Specialisation::proceeding: return "PROCEEDINGS";
    case Specialisation::author: return "AUTHORS";
    case Specialisation::editor: return "EDITORS";
    case Specialisation::none: break;
  }
  switch (c) {
    case Concept::conference: return "CONFERENCES";
    case Concept::journal: return "JOURNALS";
    case Concept::keyword: return "KEYWORDS";
    case Concept::publication: return "PUBLICATIONS";
    case Concept::person: return "PERSONS";
    case Concept::institution: return "INSTITUTIONS";
  }
  return "";
}

std::string_view comparator_words(Comparator c) {
  switch (c) {
    case Comparator::eq: return "";
    case Comparator::at_least: return "AT LEAST ";
    case Comparator::at_most: return "AT MOST ";
    case Comparator::more_than: return "MORE THAN ";
    case Comparator::less_than: return "LESS THAN ";
  }
  return "";
}

std::string_view metric_words(Metric m) { return m == Metric::core_rank ? "CORERANK METRIC" : "H-AVG METRIC"; }

std::string_view attribute_word(TextAttribute a) {
  switch (a) {
    case TextAttribute::name: return "NAME";
    case TextAttribute::acronym: return "ACRONYM";
    case TextAttribute::title: return "TITLE";
    case TextAttribute::abstract_text: return "ABSTRACT";
    case TextAttribute::location: return "LOCATION";
  }
  return "";
}

std::string mode_prefix(NameMatchMode m) {
  switch (m) {
    case NameMatchMode::fuzzy: return "~";
    case NameMatchMode::strict: return "=";
    case NameMatchMode::standard: break;
  }
  return "";
}

std::string render_ref(const EntityRef& r) {
  if (const auto* lit = std::get_if<Literal>(&r)) {
    std::string out = mode_prefix(lit->mode);
    if (lit->bracketed) {
      out += "[";
      for (std::size_t i = 0; i < lit->values.size(); ++i) {
        if (i > 0) out += ", ";
        out += quote(lit->values[i]);
      }
      out += "]";
    } else {
      out += quote(lit->values.empty() ? std::string() : lit->values.front());
    }
    return out;
  }
  return "(" + render(*std::get<Box<Query>>(r)) + ")";
}

std::string render_scope(const FilterLeaf& f, std::string_view word) {
  if (f.args.empty()) return "";
  return " " + std::string(word) + " " + render_ref(f.args.front());
}

std::string rank_prefix(const std::optional<std::uint64_t>& rank) {
  return rank ? "~" + std::to_string(*rank) + " " : "";
}

std::string render_leaf(const FilterLeaf& f) {
  auto with_string = [&f](std::string_view phrase) { return std::string(phrase) + " " + quote(f.text); };
  auto with_ref = [&f](std::string_view phrase) { return std::string(phrase) + " " + render_ref(f.args.front()); };
  auto most = [&f] { return f.direction == Direction::descending ? "MOST" : "LEAST"; };
  switch (f.kind) {
    case FilterKind::with_dblpkey: return with_string("WITH DBLPKEY");
    case FilterKind::with_doi: return with_string("WITH DOI");
    case FilterKind::with_isbn: return with_string("WITH ISBN");
    case FilterKind::with_volume: return with_string("WITH VOLUME");
    case FilterKind::with_orcid: return with_string("WITH ORCID");
    case FilterKind::with_acronym: return with_string("WITH ACRONYM");
    case FilterKind::with_city: return with_string("WITH CITY");
    case FilterKind::with_country: return with_string("WITH COUNTRY");
    case FilterKind::named: return "NAMED " + mode_prefix(f.mode) + quote(f.text);
    case FilterKind::titled: return "TITLED " + mode_prefix(f.mode) + quote(f.text);
    case FilterKind::with_year:
      return "WITH YEAR " + std::string(comparator_words(f.comparator)) + std::to_string(f.number);
    case FilterKind::about_keyword: return with_ref("ABOUT KEYWORDS");
    case FilterKind::about_terms: return with_string("ABOUT TERMS");
    case FilterKind::of: return with_ref("OF");
    case FilterKind::appeared_in: return with_ref("APPEARED IN");
    case FilterKind::cited_by: return with_ref("CITED BY");
    case FilterKind::references: return with_ref("REFERENCES");
    case FilterKind::edited_by: return with_ref("EDITED BY");
    case FilterKind::written_by: return with_ref("WRITTEN BY");
    case FilterKind::written_by_any: {
      std::string out = "WRITTEN BY ANY ";
      if (f.distinct) out += "DISTINCT ";
      out += std::to_string(f.number) + " OF [";
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i > 0) out += ", ";
        out += render_ref(f.args[i]);
      }
      return out + "]";
    }
    case FilterKind::published_with: return with_ref("PUBLISHED WITH");
    case FilterKind::authored: {
      std::string phrase = "AUTHORED";
      if (f.authored == AuthoredMode::only) phrase += " ONLY";
      if (f.authored == AuthoredMode::no) phrase += " NO";
      return with_ref(phrase);
    }
    case FilterKind::edited: return with_ref("EDITED");
    case FilterKind::works_for: return with_ref("WORKS FOR");
    case FilterKind::published_in: return with_ref("PUBLISHED IN");
    case FilterKind::with_members: return with_ref("WITH MEMBERS");
    case FilterKind::most_references:
      return "WITH " + rank_prefix(f.rank) + most() + " REFERENCES" + render_scope(f, "TO");
    case FilterKind::most_citations:
      return "WITH " + rank_prefix(f.rank) + most() + " CITATIONS" + render_scope(f, "FROM");
    case FilterKind::most_coauthors:
      return "WITH " + rank_prefix(f.rank) + most() + " COAUTHORS" + render_scope(f, "IN");
    case FilterKind::extreme_metric:
      return "WITH " + rank_prefix(f.rank) + (f.direction == Direction::descending ? "HIGHEST " : "LOWEST ") +
             std::string(metric_words(f.metric));
    case FilterKind::extreme_length:
      return "WITH " + rank_prefix(f.rank) + (f.direction == Direction::descending ? "LONGEST " : "SHORTEST ") +
             std::string(attribute_word(f.attribute));
    case FilterKind::metric_compare:
      return "WITH " + std::string(metric_words(f.metric)) + " " + std::string(comparator_words(f.comparator)) +
             (f.value_is_string ? quote(f.text) : std::to_string(f.number));
    case FilterKind::length_compare:
      return "WITH " + std::string(attribute_word(f.attribute)) + " LENGTH " +
             std::string(comparator_words(f.comparator)) + std::to_string(f.number);
    case FilterKind::count_references:
      return "WITH " + std::string(comparator_words(f.comparator)) + std::to_string(f.number) + " REFERENCES" +
             render_scope(f, "TO");
    case FilterKind::count_citations:
      return "WITH " + std::string(comparator_words(f.comparator)) + std::to_string(f.number) + " CITATIONS" +
             render_scope(f, "FROM");
    case FilterKind::count_coauthors:
      return "WITH " + std::string(comparator_words(f.comparator)) + std::to_string(f.number) + " COAUTHORS" +
             render_scope(f, "IN");
  }
  return "";
}

std::string_view op_words(BoolOp op) {
  switch (op) {
    case BoolOp::and_: return "AND";
    case BoolOp::or_: return "OR";
    case BoolOp::and_not: return "AND NOT";
    case BoolOp::or_not: return "OR NOT";
  }
  return "";
}

std::string render_body(const AggregationQuery& a) {
  switch (a.kind) {
    case AggregationKind::most_cited: return "MOST CITED " + render_ref(a.args[0]);
    case AggregationKind::newest: return "NEWEST " + render_ref(a.args[0]);
    case AggregationKind::oldest: return "OLDEST " + render_ref(a.args[0]);
    case AggregationKind::coauthors_of: return "COAUTHORS OF " + render_ref(a.args[0]);
    case AggregationKind::most_publishing_in:
      return "MOST PUBLISHING " + render_ref(a.args[0]) + " IN " + render_ref(a.args[1]);
    case AggregationKind::most_researching_about:
    case AggregationKind::most_researching_institution:
      return "MOST RESEARCHING " + render_ref(a.args[0]) + " ABOUT KEYWORDS " + render_ref(a.args[1]);
    case AggregationKind::related_keywords_to: {
      std::string out = "RELATED KEYWORDS TO " + render_ref(a.args[0]);
      if (a.args.size() > 1) out += " IN " + render_ref(a.args[1]);
      return out;
    }
    case AggregationKind::most_frequent_keywords_of: return "MOST FREQUENT KEYWORDS OF " + render_ref(a.args[0]);
  }
  return "";
}

std::string render_body(const FunctionQuery& f) {
  switch (f.kind) {
    case FunctionKind::count: return "COUNT " + render_ref(f.args[0]);
    case FunctionKind::core_ranks_for: {
      std::string out = "CORE RANKS FOR " + render_ref(f.args[0]);
      if (f.args.size() > 1) out += " IN " + render_ref(f.args[1]);
      return out;
    }
    case FunctionKind::alternative_names_for: return "ALTERNATIVE NAMES FOR " + render_ref(f.args[0]);
    case FunctionKind::most_frequent_attribute_of:
      return "MOST FREQUENT " + quote(f.attributes.front()) + " OF " + render_ref(f.args[0]);
    case FunctionKind::attributes_of: {
      std::string out = "[";
      for (std::size_t i = 0; i < f.attributes.size(); ++i) {
        if (i > 0) out += ", ";
        out += quote(f.attributes[i]);
      }
      return out + "] OF " + render_ref(f.args[0]);
    }
  }
  return "";
}

std::string render_body(const EntityQuery& e) {
  std::string out(concept_word(e.base, e.specialisation));
  if (e.filter) out += " " + render(*e.filter);
  return out;
}

constexpr std::array<std::string_view, 36> kFilterKindNames = {
    "with_dblpkey",   "with_doi",        "with_isbn",      "with_volume",   "with_orcid",       "with_acronym",
    "with_city",      "with_country",    "named",          "titled",        "with_year",        "about_keyword",
    "about_terms",    "of",              "appeared_in",    "cited_by",      "references",       "edited_by",
    "written_by",     "written_by_any",  "published_with", "authored",      "edited",           "works_for",
    "published_in",   "with_members",    "most_references", "most_citations", "most_coauthors", "extreme_metric",
    "extreme_length", "metric_compare",  "length_compare", "count_references", "count_citations", "count_coauthors",
};

}  // namespace

std::string_view filter_kind_name(FilterKind k) { return kFilterKindNames[static_cast<std::size_t>(k)]; }

bool is_aggregating(FilterKind k) {
  switch (k) {
    case FilterKind::most_references:
    case FilterKind::most_citations:
    case FilterKind::most_coauthors:
    case FilterKind::extreme_metric:
    case FilterKind::extreme_length: return true;
    default: return false;
  }
}

std::string_view aggregation_kind_name(AggregationKind k) {
  switch (k) {
    case AggregationKind::most_cited: return "most_cited";
    case AggregationKind::newest: return "newest";
    case AggregationKind::oldest: return "oldest";
    case AggregationKind::coauthors_of: return "coauthors_of";
    case AggregationKind::most_publishing_in: return "most_publishing_in";
    case AggregationKind::most_researching_about: return "most_researching_about";
    case AggregationKind::related_keywords_to: return "related_keywords_to";
    case AggregationKind::most_frequent_keywords_of: return "most_frequent_keywords_of";
    case AggregationKind::most_researching_institution: return "most_researching_institution";
  }
  return "";
}

std::string_view function_kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::count: return "count";
    case FunctionKind::core_ranks_for: return "core_ranks_for";
    case FunctionKind::alternative_names_for: return "alternative_names_for";
    case FunctionKind::most_frequent_attribute_of: return "most_frequent_attribute_of";
    case FunctionKind::attributes_of: return "attributes_of";
  }
  return "";
}

std::optional<Concept> query_concept(const Query& q) {
  if (const auto* e = std::get_if<EntityQuery>(&q.body)) return e->base;
  if (const auto* a = std::get_if<AggregationQuery>(&q.body)) {
    switch (a->kind) {
      case AggregationKind::most_cited:
      case AggregationKind::newest:
      case AggregationKind::oldest: return Concept::publication;
      case AggregationKind::coauthors_of:
      case AggregationKind::most_publishing_in:
      case AggregationKind::most_researching_about: return Concept::person;
      case AggregationKind::most_researching_institution: return Concept::institution;
      case AggregationKind::related_keywords_to:
      case AggregationKind::most_frequent_keywords_of: return Concept::keyword;
    }
  }
  return std::nullopt;
}

std::string render(const FilterExpr& f) {
  if (const auto* leaf = std::get_if<FilterLeaf>(&f)) return render_leaf(*leaf);
  const auto& b = std::get<FilterBinary>(f);
  return render(*b.lhs) + " " + std::string(op_words(b.op)) + " " + render(*b.rhs);
}

std::string render(const Query& q) {
  std::string out;
  if (q.limit) out += std::to_string(*q.limit) + " ";
  out += rank_prefix(q.rank);
  out += std::visit([](const auto& body) { return render_body(body); }, q.body);
  return out;
}

}  // namespace schenql
