#include "schenql/parser.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <map>

#include "schenql/lexer.hpp"

namespace schenql {

namespace {

using Cat = SuggestionCategory;

// Set of nested-query shapes allowed at a position: one bit per concept plus
// general functions.
using Mask = std::uint8_t;
constexpr Mask bit(Concept c) { return static_cast<Mask>(1u << static_cast<unsigned>(c)); }
constexpr Mask kFunctionBit = 1u << 6;
constexpr Mask kAnyQuery = 0x7f;
constexpr Mask kC = bit(Concept::conference);
constexpr Mask kJ = bit(Concept::journal);
constexpr Mask kK = bit(Concept::keyword);
constexpr Mask kPU = bit(Concept::publication);
constexpr Mask kPE = bit(Concept::person);
constexpr Mask kI = bit(Concept::institution);

struct ConceptWord {
  std::string_view plural;
  std::string_view singular;
  Concept base;
  Specialisation specialisation;
};

constexpr std::array<ConceptWord, 15> kConceptWords = {{
    {"CONFERENCES", "CONFERENCE", Concept::conference, Specialisation::none},
    {"JOURNALS", "JOURNAL", Concept::journal, Specialisation::none},
    {"KEYWORDS", "KEYWORD", Concept::keyword, Specialisation::none},
    {"PUBLICATIONS", "PUBLICATION", Concept::publication, Specialisation::none},
    {"BOOKS", "BOOK", Concept::publication, Specialisation::book},
    {"ARTICLES", "ARTICLE", Concept::publication, Specialisation::article},
    {"PHDTHESISS", "PHDTHESIS", Concept::publication, Specialisation::phdthesis},
    {"MASTERTHESISS", "MASTERTHESIS", Concept::publication, Specialisation::masterthesis},
    {"INPROCEEDINGS", "INPROCEEDING", Concept::publication, Specialisation::inproceeding},
    {"INCOLLECTIONS", "INCOLLECTION", Concept::publication, Specialisation::incollection},
    {"PROCEEDINGS", "PROCEEDING", Concept::publication, Specialisation::proceeding},
    {"PERSONS", "PERSON", Concept::person, Specialisation::none},
    {"AUTHORS", "AUTHOR", Concept::person, Specialisation::author},
    {"EDITORS", "EDITOR", Concept::person, Specialisation::editor},
    {"INSTITUTIONS", "INSTITUTION", Concept::institution, Specialisation::none},
}};

std::vector<std::string_view> split_words(std::string_view phrase) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < phrase.size()) {
    auto j = phrase.find(' ', i);
    if (j == std::string_view::npos) j = phrase.size();
    out.push_back(phrase.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

struct Expectation {
  std::string token;
  Cat category;
  bool hidden;
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : t_(tokens) {}

  std::optional<Query> parse_all() { return query(kAnyQuery); }

  std::size_t pos() const { return pos_; }
  std::size_t furthest() const { return furthest_; }
  const std::vector<Expectation>& expected() const { return expected_; }

 private:
  // ---- token helpers ----------------------------------------------------

  void expect_at(std::size_t at, std::string token, Cat cat, bool hidden) {
    if (at > furthest_) {
      furthest_ = at;
      expected_.clear();
    }
    if (at == furthest_) expected_.push_back(Expectation{std::move(token), cat, hidden});
  }

  bool word_at(std::size_t i, std::string_view w) const {
    return i < t_.size() && t_[i].kind == TokenKind::keyword && t_[i].lexeme == w;
  }

  bool accept(std::string_view phrase, Cat cat, bool hidden = false) {
    auto words = split_words(phrase);
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (!word_at(pos_ + k, words[k])) {
        std::string rest;
        for (std::size_t r = k; r < words.size(); ++r) {
          if (!rest.empty()) rest += ' ';
          rest += words[r];
        }
        expect_at(pos_ + k, std::move(rest), cat, hidden && k == 0);
        return false;
      }
    }
    pos_ += words.size();
    return true;
  }

  const Token* take(TokenKind kind, Cat cat) {
    if (pos_ < t_.size() && t_[pos_].kind == kind) return &t_[pos_++];
    expect_at(pos_, std::string(placeholder(kind)), cat, false);
    return nullptr;
  }

  static std::string_view placeholder(TokenKind kind) {
    switch (kind) {
      case TokenKind::string_literal: return "\"STRING\"";
      case TokenKind::number: return "NUMBER";
      case TokenKind::tilde: return "~";
      case TokenKind::equals: return "=";
      case TokenKind::lbracket: return "[";
      case TokenKind::rbracket: return "]";
      case TokenKind::lparen: return "(";
      case TokenKind::rparen: return ")";
      case TokenKind::comma: return ",";
      case TokenKind::keyword: return "KEYWORD";
    }
    return "";
  }

  std::optional<std::uint64_t> number(Cat cat = Cat::literal_placeholder) {
    const Token* tok = take(TokenKind::number, cat);
    if (!tok) return std::nullopt;
    std::uint64_t v = 0;
    std::from_chars(tok->lexeme.data(), tok->lexeme.data() + tok->lexeme.size(), v);
    return v;
  }

  std::optional<std::string> string_arg() {
    const Token* tok = take(TokenKind::string_literal, Cat::literal_placeholder);
    if (!tok) return std::nullopt;
    return tok->lexeme;
  }

  Span span_from(std::size_t start_token) const {
    if (start_token >= t_.size() || pos_ == start_token) {
      std::size_t at = start_token < t_.size() ? t_[start_token].span.start
                                               : (t_.empty() ? 0 : t_.back().span.end);
      return Span{at, at};
    }
    return Span{t_[start_token].span.start, t_[pos_ - 1].span.end};
  }

  template <typename F>
  auto attempt(F&& f) -> decltype(f()) {
    std::size_t save = pos_;
    auto r = f();
    if (!r) pos_ = save;
    return r;
  }

  // ---- queries ----------------------------------------------------------

  std::optional<Query> query(Mask mask) {
    return attempt([&]() -> std::optional<Query> {
      std::size_t start = pos_;
      Query q;
      if (pos_ < t_.size() && t_[pos_].kind == TokenKind::number) {
        q.limit = number(Cat::restriction);
      } else {
        expect_at(pos_, "NUMBER", Cat::restriction, false);
      }
      if (take(TokenKind::tilde, Cat::restriction)) {
        auto n = number(Cat::restriction);
        if (!n) return std::nullopt;
        q.rank = n;
      }
      auto body = query_body(mask);
      if (!body) return std::nullopt;
      q.body = std::move(*body);
      q.span.span = span_from(start);
      return q;
    });
  }

  using Body = std::variant<EntityQuery, AggregationQuery, FunctionQuery>;

  std::optional<Body> query_body(Mask mask) {
    std::optional<Body> best;
    auto try_alt = [&](auto&& f) {
      if (best) return;
      auto r = attempt(f);
      if (r) best = std::move(*r);
    };
    try_alt([&]() -> std::optional<Body> { return entity_query(mask); });
    if (mask & kPU) {
      try_alt([&]() -> std::optional<Body> { return publication_aggregate(); });
    }
    if (mask & kPE) {
      try_alt([&]() -> std::optional<Body> { return coauthors_of(); });
      try_alt([&]() -> std::optional<Body> { return most_publishing(); });
    }
    if (mask & (kPE | kI)) {
      try_alt([&]() -> std::optional<Body> { return most_researching(mask); });
    }
    if (mask & kK) {
      try_alt([&]() -> std::optional<Body> { return related_keywords(); });
      try_alt([&]() -> std::optional<Body> { return most_frequent_keywords(); });
    }
    if (mask & kFunctionBit) {
      try_alt([&]() -> std::optional<Body> { return function_query(); });
    }
    return best;
  }

  std::optional<Body> entity_query(Mask mask) {
    for (const auto& w : kConceptWords) {
      if (!(mask & bit(w.base))) continue;
      bool special = w.specialisation != Specialisation::none;
      if (accept(w.plural, Cat::base_concept, special) || accept(w.singular, Cat::base_concept, special)) {
        EntityQuery e;
        e.base = w.base;
        e.specialisation = w.specialisation;
        if (w.base == Concept::keyword) {
          if (auto leaf = attempt([&] { return keyword_of_filter(); })) e.filter = FilterExpr{std::move(*leaf)};
        } else {
          e.filter = filter_chain(w.base);
        }
        return e;
      }
    }
    return std::nullopt;
  }

  std::optional<Body> publication_aggregate() {
    AggregationKind kind;
    if (accept("MOST CITED", Cat::function)) {
      kind = AggregationKind::most_cited;
    } else if (accept("NEWEST", Cat::function)) {
      kind = AggregationKind::newest;
    } else if (accept("OLDEST", Cat::function)) {
      kind = AggregationKind::oldest;
    } else {
      return std::nullopt;
    }
    auto arg = publication_ref();
    if (!arg) return std::nullopt;
    AggregationQuery a;
    a.kind = kind;
    a.args.push_back(std::move(*arg));
    return a;
  }

  std::optional<Body> coauthors_of() {
    if (!accept("COAUTHORS OF", Cat::function)) return std::nullopt;
    auto arg = person_ref();
    if (!arg) return std::nullopt;
    AggregationQuery a;
    a.kind = AggregationKind::coauthors_of;
    a.args.push_back(std::move(*arg));
    return a;
  }

  std::optional<Body> most_publishing() {
    if (!accept("MOST PUBLISHING", Cat::function)) return std::nullopt;
    auto persons = person_ref();
    if (!persons) return std::nullopt;
    if (!accept("IN", Cat::function)) return std::nullopt;
    auto venues = venue_ref();
    if (!venues) return std::nullopt;
    AggregationQuery a;
    a.kind = AggregationKind::most_publishing_in;
    a.args.push_back(std::move(*persons));
    a.args.push_back(std::move(*venues));
    return a;
  }

  std::optional<Body> most_researching(Mask mask) {
    if (!accept("MOST RESEARCHING", Cat::function)) return std::nullopt;
    Mask subjects = static_cast<Mask>(mask & (kPE | kI));
    std::optional<EntityRef> subject = attempt([&]() -> std::optional<EntityRef> { return nested(subjects); });
    if (!subject) {
      if (mask & kPE) {
        subject = literal({Concept::person}, false);
      } else {
        subject = literal({Concept::institution}, false);
      }
    }
    if (!subject) return std::nullopt;
    if (!accept("ABOUT", Cat::function)) return std::nullopt;
    optional_keyword_word();
    auto keywords = keyword_ref();
    if (!keywords) return std::nullopt;
    AggregationQuery a;
    bool institution = false;
    if (auto* lit = std::get_if<Literal>(&*subject)) {
      institution = lit->kinds.front() == Concept::institution;
    } else {
      institution = query_concept(*std::get<Box<Query>>(*subject)) == Concept::institution;
    }
    a.kind = institution ? AggregationKind::most_researching_institution : AggregationKind::most_researching_about;
    a.args.push_back(std::move(*subject));
    a.args.push_back(std::move(*keywords));
    return a;
  }

  std::optional<Body> related_keywords() {
    if (!accept("RELATED KEYWORDS TO", Cat::function) && !accept("RELATED KEYWORD TO", Cat::function)) {
      return std::nullopt;
    }
    AggregationQuery a;
    a.kind = AggregationKind::related_keywords_to;
    if (auto seeds = attempt([&]() -> std::optional<EntityRef> { return nested(kK); })) {
      a.args.push_back(std::move(*seeds));
      if (auto scope = attempt([&]() -> std::optional<EntityRef> {
            if (!accept("IN", Cat::function)) return std::nullopt;
            return publication_ref();
          })) {
        a.args.push_back(std::move(*scope));
      }
      return a;
    }
    auto seeds = keyword_literal();
    if (!seeds) return std::nullopt;
    a.args.push_back(std::move(*seeds));
    return a;
  }

  std::optional<Body> most_frequent_keywords() {
    if (!accept("MOST FREQUENT KEYWORDS OF", Cat::function) &&
        !accept("MOST FREQUENT KEYWORD OF", Cat::function)) {
      return std::nullopt;
    }
    auto arg = ref(kC | kJ | kPU | kPE | kK, {Concept::conference, Concept::journal, Concept::publication, Concept::person});
    if (!arg) return std::nullopt;
    AggregationQuery a;
    a.kind = AggregationKind::most_frequent_keywords_of;
    a.args.push_back(std::move(*arg));
    return a;
  }

  std::optional<Body> function_query() {
    std::optional<Body> best;
    auto try_alt = [&](auto&& f) {
      if (best) return;
      auto r = attempt(f);
      if (r) best = std::move(*r);
    };
    try_alt([&]() -> std::optional<Body> {
      if (!accept("COUNT", Cat::function)) return std::nullopt;
      auto q = nested(kAnyQuery);
      if (!q) return std::nullopt;
      FunctionQuery f;
      f.kind = FunctionKind::count;
      f.args.push_back(std::move(*q));
      return f;
    });
    try_alt([&]() -> std::optional<Body> {
      if (!accept("CORE RANKS FOR", Cat::function)) return std::nullopt;
      auto persons = person_ref();
      if (!persons) return std::nullopt;
      FunctionQuery f;
      f.kind = FunctionKind::core_ranks_for;
      f.args.push_back(std::move(*persons));
      if (auto scope = attempt([&]() -> std::optional<EntityRef> {
            if (!accept("IN", Cat::function)) return std::nullopt;
            return ref(kC | kJ | kPU, {Concept::conference, Concept::journal, Concept::publication});
          })) {
        f.args.push_back(std::move(*scope));
      }
      return f;
    });
    try_alt([&]() -> std::optional<Body> {
      if (!accept("ALTERNATIVE NAMES FOR", Cat::function)) return std::nullopt;
      auto arg = ref(kC | kJ | kI | kPE, {Concept::conference, Concept::journal, Concept::institution, Concept::person});
      if (!arg) return std::nullopt;
      FunctionQuery f;
      f.kind = FunctionKind::alternative_names_for;
      f.args.push_back(std::move(*arg));
      return f;
    });
    try_alt([&]() -> std::optional<Body> {
      if (!accept("MOST FREQUENT", Cat::function)) return std::nullopt;
      auto attr = string_arg();
      if (!attr) return std::nullopt;
      auto q = of_nested_query();
      if (!q) return std::nullopt;
      FunctionQuery f;
      f.kind = FunctionKind::most_frequent_attribute_of;
      f.attributes.push_back(lower(*attr));
      f.args.push_back(std::move(*q));
      return f;
    });
    try_alt([&]() -> std::optional<Body> {
      if (!take(TokenKind::lbracket, Cat::function)) return std::nullopt;
      FunctionQuery f;
      f.kind = FunctionKind::attributes_of;
      auto first = string_arg();
      if (!first) return std::nullopt;
      f.attributes.push_back(lower(*first));
      while (take(TokenKind::comma, Cat::operator_)) {
        auto next = string_arg();
        if (!next) return std::nullopt;
        f.attributes.push_back(lower(*next));
      }
      if (!take(TokenKind::rbracket, Cat::operator_)) return std::nullopt;
      auto q = of_nested_query();
      if (!q) return std::nullopt;
      f.args.push_back(std::move(*q));
      return f;
    });
    return best;
  }

  std::optional<EntityRef> of_nested_query() {
    if (!accept("OF", Cat::function)) return std::nullopt;
    return nested(kAnyQuery);
  }

  static std::string lower(std::string s) {
    for (auto& c : s) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
  }

  // ---- arguments --------------------------------------------------------

  std::optional<EntityRef> nested(Mask mask) {
    if (!take(TokenKind::lparen, Cat::operator_)) return std::nullopt;
    auto q = query(mask);
    if (!q) return std::nullopt;
    if (!take(TokenKind::rparen, Cat::operator_)) return std::nullopt;
    return EntityRef{Box<Query>(std::move(*q))};
  }

  /// `( query )` restricted to `mask`, or a literal of `kinds`.
  std::optional<EntityRef> ref(Mask mask, std::vector<Concept> kinds) {
    if (auto n = attempt([&] { return nested(mask); })) return n;
    return attempt([&] { return literal(std::move(kinds), false); });
  }

  std::optional<EntityRef> publication_ref() { return ref(kPU, {Concept::publication}); }
  std::optional<EntityRef> person_ref() { return ref(kPE, {Concept::person}); }
  std::optional<EntityRef> institution_ref() { return ref(kI, {Concept::institution}); }
  std::optional<EntityRef> venue_ref() { return ref(kC | kJ, {Concept::conference, Concept::journal}); }

  std::optional<EntityRef> keyword_ref() {
    if (auto n = attempt([&] { return nested(kK); })) return n;
    return attempt([&] { return keyword_literal(); });
  }

  std::optional<EntityRef> keyword_literal() { return literal({Concept::keyword}, true); }

  std::optional<EntityRef> literal(std::vector<Concept> kinds, bool allow_list) {
    std::size_t start = pos_;
    auto has = [&kinds](std::initializer_list<Concept> cs) {
      return std::any_of(kinds.begin(), kinds.end(),
                         [&cs](Concept k) { return std::find(cs.begin(), cs.end(), k) != cs.end(); });
    };
    Literal lit;
    bool allow_tilde = has({Concept::publication, Concept::person, Concept::institution});
    bool allow_equals = has({Concept::person});
    if (allow_tilde && take(TokenKind::tilde, Cat::literal_placeholder)) {
      lit.mode = NameMatchMode::fuzzy;
      std::erase_if(kinds, [](Concept k) {
        return k != Concept::publication && k != Concept::person && k != Concept::institution;
      });
    } else if (allow_equals && take(TokenKind::equals, Cat::literal_placeholder)) {
      lit.mode = NameMatchMode::strict;
      std::erase_if(kinds, [](Concept k) { return k != Concept::person; });
    }
    lit.kinds = std::move(kinds);
    if (lit.mode == NameMatchMode::standard && allow_list && take(TokenKind::lbracket, Cat::operator_)) {
      auto first = string_arg();
      if (!first) return std::nullopt;
      lit.values.push_back(std::move(*first));
      while (take(TokenKind::comma, Cat::operator_)) {
        auto next = string_arg();
        if (!next) return std::nullopt;
        lit.values.push_back(std::move(*next));
      }
      if (!take(TokenKind::rbracket, Cat::operator_)) return std::nullopt;
      lit.bracketed = true;
    } else {
      auto value = string_arg();
      if (!value) return std::nullopt;
      lit.values.push_back(std::move(*value));
    }
    lit.span.span = span_from(start);
    return EntityRef{std::move(lit)};
  }

  void optional_keyword_word() {
    if (!accept("KEYWORDS", Cat::filter)) accept("KEYWORD", Cat::filter);
  }

  // ---- filters ----------------------------------------------------------

  std::optional<FilterExpr> filter_chain(Concept c) {
    auto first = attempt([&] { return leaf(c); });
    if (!first) return std::nullopt;
    FilterExpr acc = std::move(*first);
    for (;;) {
      std::size_t save = pos_;
      BoolOp op = BoolOp::and_;
      if (accept("AND NOT", Cat::operator_)) {
        op = BoolOp::and_not;
      } else if (accept("OR NOT", Cat::operator_)) {
        op = BoolOp::or_not;
      } else if (accept("AND", Cat::operator_)) {
        op = BoolOp::and_;
      } else if (accept("OR", Cat::operator_)) {
        op = BoolOp::or_;
      }
      auto rhs = attempt([&] { return leaf(c); });
      if (!rhs) {
        pos_ = save;
        break;
      }
      FilterBinary b;
      b.op = op;
      b.lhs = Box<FilterExpr>(std::move(acc));
      b.rhs = Box<FilterExpr>(FilterExpr{std::move(*rhs)});
      acc = FilterExpr{std::move(b)};
    }
    return acc;
  }

  std::optional<FilterLeaf> keyword_of_filter() {
    std::size_t start = pos_;
    if (!accept("OF", Cat::filter)) return std::nullopt;
    auto arg = ref(kC | kJ | kPU | kPE, {Concept::conference, Concept::journal, Concept::publication, Concept::person});
    if (!arg) return std::nullopt;
    FilterLeaf f;
    f.kind = FilterKind::of;
    f.args.push_back(std::move(*arg));
    f.span.span = span_from(start);
    return f;
  }

  std::optional<FilterLeaf> leaf(Concept c) {
    std::size_t start = pos_;
    std::optional<FilterLeaf> out;
    auto alt = [&](auto&& f) {
      if (out) return;
      out = attempt(f);
    };
    using Leaf = std::optional<FilterLeaf>;

    auto string_filter = [&](std::string_view phrase, FilterKind kind) {
      alt([&, phrase, kind]() -> Leaf {
        if (!accept(phrase, Cat::filter)) return std::nullopt;
        auto s = string_arg();
        if (!s) return std::nullopt;
        FilterLeaf f;
        f.kind = kind;
        f.text = std::move(*s);
        return f;
      });
    };
    auto name_filter = [&](std::string_view phrase, FilterKind kind, bool allow_equals) {
      alt([&, phrase, kind, allow_equals]() -> Leaf {
        if (!accept(phrase, Cat::filter)) return std::nullopt;
        FilterLeaf f;
        f.kind = kind;
        if (take(TokenKind::tilde, Cat::literal_placeholder)) {
          f.mode = NameMatchMode::fuzzy;
        } else if (allow_equals && take(TokenKind::equals, Cat::literal_placeholder)) {
          f.mode = NameMatchMode::strict;
        }
        auto s = string_arg();
        if (!s) return std::nullopt;
        f.text = std::move(*s);
        return f;
      });
    };
    auto ref_filter = [&](std::string_view phrase, FilterKind kind, auto ref_fn) {
      alt([&, phrase, kind, ref_fn]() -> Leaf {
        if (!accept(phrase, Cat::filter)) return std::nullopt;
        auto arg = ref_fn();
        if (!arg) return std::nullopt;
        FilterLeaf f;
        f.kind = kind;
        f.args.push_back(std::move(*arg));
        return f;
      });
    };
    auto year_filter = [&] {
      alt([&]() -> Leaf {
        if (!accept("WITH YEAR", Cat::filter)) return std::nullopt;
        FilterLeaf f;
        f.kind = FilterKind::with_year;
        f.comparator = comparator();
        auto n = number();
        if (!n) return std::nullopt;
        f.number = *n;
        return f;
      });
    };
    auto about_keyword = [&] {
      alt([&]() -> Leaf {
        if (!accept("ABOUT", Cat::filter)) return std::nullopt;
        optional_keyword_word();
        auto arg = keyword_ref();
        if (!arg) return std::nullopt;
        FilterLeaf f;
        f.kind = FilterKind::about_keyword;
        f.args.push_back(std::move(*arg));
        return f;
      });
    };
    auto pub = [this] { return publication_ref(); };
    auto per = [this] { return person_ref(); };
    auto ins = [this] { return institution_ref(); };
    auto ven = [this] { return venue_ref(); };

    switch (c) {
      case Concept::conference:
      case Concept::journal:
        string_filter("WITH DBLPKEY", FilterKind::with_dblpkey);
        name_filter("NAMED", FilterKind::named, false);
        about_keyword();
        string_filter("WITH ACRONYM", FilterKind::with_acronym);
        year_filter();
        if (c == Concept::journal) string_filter("WITH VOLUME", FilterKind::with_volume);
        ref_filter("OF", FilterKind::of, pub);
        alt([&]() -> Leaf { return with_filter(c); });
        break;
      case Concept::publication:
        string_filter("WITH DBLPKEY", FilterKind::with_dblpkey);
        string_filter("WITH DOI", FilterKind::with_doi);
        string_filter("WITH ISBN", FilterKind::with_isbn);
        string_filter("WITH VOLUME", FilterKind::with_volume);
        name_filter("TITLED", FilterKind::titled, false);
        string_filter("ABOUT TERMS", FilterKind::about_terms);
        about_keyword();
        year_filter();
        ref_filter("APPEARED IN", FilterKind::appeared_in, ven);
        ref_filter("CITED BY", FilterKind::cited_by, pub);
        ref_filter("REFERENCES", FilterKind::references, pub);
        ref_filter("EDITED BY", FilterKind::edited_by, per);
        alt([&]() -> Leaf { return written_by_any(); });
        ref_filter("WRITTEN BY", FilterKind::written_by, per);
        ref_filter("PUBLISHED WITH", FilterKind::published_with, ins);
        alt([&]() -> Leaf { return with_filter(c); });
        break;
      case Concept::person:
        string_filter("WITH DBLPKEY", FilterKind::with_dblpkey);
        name_filter("NAMED", FilterKind::named, true);
        string_filter("WITH ORCID", FilterKind::with_orcid);
        alt([&]() -> Leaf {
          if (!accept("AUTHORED", Cat::filter)) return std::nullopt;
          FilterLeaf f;
          f.kind = FilterKind::authored;
          if (accept("ONLY", Cat::filter)) {
            f.authored = AuthoredMode::only;
          } else if (accept("NO", Cat::filter)) {
            f.authored = AuthoredMode::no;
          }
          auto arg = publication_ref();
          if (!arg) return std::nullopt;
          f.args.push_back(std::move(*arg));
          return f;
        });
        ref_filter("EDITED", FilterKind::edited, pub);
        ref_filter("CITED BY", FilterKind::cited_by, pub);
        ref_filter("REFERENCES", FilterKind::references, pub);
        ref_filter("WORKS FOR", FilterKind::works_for, ins);
        ref_filter("PUBLISHED IN", FilterKind::published_in, ven);
        alt([&]() -> Leaf { return with_filter(c); });
        break;
      case Concept::institution:
        string_filter("WITH DBLPKEY", FilterKind::with_dblpkey);
        name_filter("NAMED", FilterKind::named, false);
        string_filter("WITH CITY", FilterKind::with_city);
        string_filter("WITH COUNTRY", FilterKind::with_country);
        ref_filter("WITH MEMBERS", FilterKind::with_members, per);
        alt([&]() -> Leaf { return with_filter(c); });
        break;
      case Concept::keyword:
        break;
    }
    if (out) out->span.span = span_from(start);
    return out;
  }

  std::optional<FilterLeaf> written_by_any() {
    if (!accept("WRITTEN BY", Cat::filter)) return std::nullopt;
    if (!accept("ANY", Cat::filter)) return std::nullopt;
    FilterLeaf f;
    f.kind = FilterKind::written_by_any;
    f.distinct = accept("DISTINCT", Cat::filter);
    auto n = number();
    if (!n) return std::nullopt;
    f.number = *n;
    if (!accept("OF", Cat::filter)) return std::nullopt;
    if (!take(TokenKind::lbracket, Cat::operator_)) return std::nullopt;
    auto first = person_ref();
    if (!first) return std::nullopt;
    f.args.push_back(std::move(*first));
    while (take(TokenKind::comma, Cat::operator_)) {
      auto next = person_ref();
      if (!next) return std::nullopt;
      f.args.push_back(std::move(*next));
    }
    if (!take(TokenKind::rbracket, Cat::operator_)) return std::nullopt;
    return f;
  }

  Comparator comparator() {
    if (accept("AT LEAST", Cat::filter)) return Comparator::at_least;
    if (accept("AT MOST", Cat::filter)) return Comparator::at_most;
    if (accept("MORE THAN", Cat::filter)) return Comparator::more_than;
    if (accept("LESS THAN", Cat::filter)) return Comparator::less_than;
    return Comparator::eq;
  }

  std::optional<Metric> metric() {
    if (accept("CORERANK METRIC", Cat::filter)) return Metric::core_rank;
    if (accept("H-AVG METRIC", Cat::filter)) return Metric::h_avg;
    return std::nullopt;
  }

  /// Words naming the text attributes of a concept.
  static std::vector<std::pair<std::string_view, TextAttribute>> text_attributes(Concept c) {
    switch (c) {
      case Concept::conference:
      case Concept::journal: return {{"NAME", TextAttribute::name}, {"ACRONYM", TextAttribute::acronym}};
      case Concept::publication:
        return {{"TITLE", TextAttribute::title}, {"ABSTRACT", TextAttribute::abstract_text}};
      case Concept::person: return {{"NAME", TextAttribute::name}};
      case Concept::institution: return {{"NAME", TextAttribute::name}, {"LOCATION", TextAttribute::location}};
      case Concept::keyword: return {};
    }
    return {};
  }

  std::optional<TextAttribute> text_attribute(Concept c) {
    for (const auto& [word, attr] : text_attributes(c)) {
      if (accept(word, Cat::filter)) return attr;
    }
    return std::nullopt;
  }

  /// Optional `TO`/`FROM`/`IN` scope of a counted relation.
  void scope(FilterLeaf& f, std::string_view word) {
    auto s = attempt([&]() -> std::optional<EntityRef> {
      if (!accept(word, Cat::filter)) return std::nullopt;
      return publication_ref();
    });
    if (s) f.args.push_back(std::move(*s));
  }

  /// REFERENCES (TO ..)? | CITATIONS (FROM ..)? | COAUTHORS (IN ..)? as allowed.
  bool counted_relation(FilterLeaf& f, Concept c, bool aggregate) {
    if (c == Concept::publication || (c == Concept::person && aggregate)) {
      if (accept("REFERENCES", Cat::filter)) {
        f.kind = aggregate ? FilterKind::most_references : FilterKind::count_references;
        scope(f, "TO");
        return true;
      }
      if (accept("CITATIONS", Cat::filter)) {
        f.kind = aggregate ? FilterKind::most_citations : FilterKind::count_citations;
        scope(f, "FROM");
        return true;
      }
    }
    if (c == Concept::person && accept("COAUTHORS", Cat::filter)) {
      f.kind = aggregate ? FilterKind::most_coauthors : FilterKind::count_coauthors;
      scope(f, "IN");
      return true;
    }
    return false;
  }

  std::optional<FilterLeaf> with_filter(Concept c) {
    if (!accept("WITH", Cat::filter)) return std::nullopt;
    using Leaf = std::optional<FilterLeaf>;
    // Aggregations, optionally rank-restricted.
    if (auto agg = attempt([&]() -> Leaf {
          FilterLeaf f;
          if (take(TokenKind::tilde, Cat::restriction)) {
            auto n = number(Cat::restriction);
            if (!n) return std::nullopt;
            f.rank = n;
          }
          if (c == Concept::publication || c == Concept::person) {
            if (auto r = attempt([&]() -> Leaf {
                  FilterLeaf g = f;
                  if (accept("MOST", Cat::filter)) {
                    g.direction = Direction::descending;
                  } else if (accept("LEAST", Cat::filter)) {
                    g.direction = Direction::ascending;
                  } else {
                    return std::nullopt;
                  }
                  if (!counted_relation(g, c, true)) return std::nullopt;
                  return g;
                })) {
              return r;
            }
          }
          if (accept("HIGHEST", Cat::filter)) {
            f.direction = Direction::descending;
          } else if (accept("LOWEST", Cat::filter)) {
            f.direction = Direction::ascending;
          } else if (accept("LONGEST", Cat::filter)) {
            f.direction = Direction::descending;
            f.kind = FilterKind::extreme_length;
          } else if (accept("SHORTEST", Cat::filter)) {
            f.direction = Direction::ascending;
            f.kind = FilterKind::extreme_length;
          } else {
            return std::nullopt;
          }
          if (f.kind == FilterKind::extreme_length) {
            auto attr = text_attribute(c);
            if (!attr) return std::nullopt;
            f.attribute = *attr;
            return f;
          }
          auto m = metric();
          if (!m) return std::nullopt;
          f.kind = FilterKind::extreme_metric;
          f.metric = *m;
          return f;
        })) {
      return agg;
    }
    // METRIC COMP value.
    if (auto cmp = attempt([&]() -> Leaf {
          auto m = metric();
          if (!m) return std::nullopt;
          FilterLeaf f;
          f.kind = FilterKind::metric_compare;
          f.metric = *m;
          f.comparator = comparator();
          if (pos_ < t_.size() && t_[pos_].kind == TokenKind::string_literal) {
            f.value_is_string = true;
            f.text = *string_arg();
            return f;
          }
          expect_at(pos_, "\"STRING\"", Cat::literal_placeholder, false);
          auto n = number();
          if (!n) return std::nullopt;
          f.number = *n;
          return f;
        })) {
      return cmp;
    }
    // attribute LENGTH COMP number.
    if (auto len = attempt([&]() -> Leaf {
          auto attr = text_attribute(c);
          if (!attr) return std::nullopt;
          if (!accept("LENGTH", Cat::filter)) return std::nullopt;
          FilterLeaf f;
          f.kind = FilterKind::length_compare;
          f.attribute = *attr;
          f.comparator = comparator();
          auto n = number();
          if (!n) return std::nullopt;
          f.number = *n;
          return f;
        })) {
      return len;
    }
    // COMP number REFERENCES/CITATIONS/COAUTHORS.
    if (c == Concept::publication || c == Concept::person) {
      return attempt([&]() -> Leaf {
        FilterLeaf f;
        f.comparator = comparator();
        auto n = number();
        if (!n) return std::nullopt;
        f.number = *n;
        if (!counted_relation(f, c, false)) return std::nullopt;
        return f;
      });
    }
    return std::nullopt;
  }

  const std::vector<Token>& t_;
  std::size_t pos_ = 0;
  std::size_t furthest_ = 0;
  std::vector<Expectation> expected_;
};

std::vector<Suggestion> visible_expectations(const std::vector<Expectation>& expected) {
  std::map<std::string, Cat> best;
  for (const auto& e : expected) {
    if (e.hidden) continue;
    auto [it, inserted] = best.emplace(e.token, e.category);
    if (!inserted && e.category < it->second) it->second = e.category;
  }
  std::vector<Suggestion> out;
  for (const auto& [token, cat] : best) out.push_back(Suggestion{token, cat});
  std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.category != b.category) return a.category < b.category;
    return a.token < b.token;
  });
  return out;
}

Diagnostic syntax_error(const std::vector<Token>& tokens, std::string_view text, const Parser& p) {
  Diagnostic d;
  d.code = DiagnosticCode::syntax_error;
  auto suggestions = visible_expectations(p.expected());
  for (const auto& s : suggestions) d.expected.push_back(s.token);
  if (p.furthest() < tokens.size()) {
    const auto& tok = tokens[p.furthest()];
    d.span = tok.span;
    std::string shown = tok.kind == TokenKind::string_literal ? "\"" + tok.lexeme + "\"" : tok.lexeme;
    d.message = "unexpected '" + shown + "'";
  } else {
    d.span = Span{text.size(), text.size()};
    d.message = "unexpected end of query";
  }
  if (!d.expected.empty()) {
    d.message += ", expected ";
    for (std::size_t i = 0; i < d.expected.size(); ++i) {
      if (i > 0) d.message += i + 1 == d.expected.size() ? " or " : ", ";
      d.message += d.expected[i];
    }
  }
  return d;
}

}  // namespace

std::string_view suggestion_category_name(SuggestionCategory c) {
  switch (c) {
    case Cat::base_concept: return "base_concept";
    case Cat::filter: return "filter";
    case Cat::literal_placeholder: return "literal_placeholder";
    case Cat::restriction: return "restriction";
    case Cat::operator_: return "operator";
    case Cat::function: return "function";
  }
  return "";
}

Query parse(std::string_view text) {
  auto tokens = tokenize(text);
  Parser p(tokens);
  auto q = p.parse_all();
  if (q && p.pos() == tokens.size()) return std::move(*q);
  throw QueryError(syntax_error(tokens, text, p));
}

SuggestResult suggest(std::string_view prefix) {
  SuggestResult out;
  std::vector<Token> tokens;
  try {
    tokens = tokenize(prefix);
  } catch (const QueryError& e) {
    out.diagnostic = e.diagnostic();
    return out;
  }
  Parser p(tokens);
  auto q = p.parse_all();
  out.complete = q && p.pos() == tokens.size();
  if (p.furthest() == tokens.size()) out.suggestions = visible_expectations(p.expected());
  if (out.suggestions.empty() && !out.complete) out.diagnostic = syntax_error(tokens, prefix, p);
  return out;
}

}  // namespace schenql
