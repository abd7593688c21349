#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "schenql/corpus.hpp"
#include "schenql/diagnostic.hpp"
#include "schenql/metrics.hpp"

namespace schenql {

/// Heap-allocated value with deep copy and deep equality, for recursive nodes.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

/// Source position carried by AST nodes; ignored by structural equality.
struct SourceSpan {
  Span span;
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

enum class Specialisation : std::uint8_t {
  none,
  book,
  article,
  phdthesis,
  masterthesis,
  inproceeding,
  incollection,
  proceeding,
  author,
  editor,
};

enum class Comparator : std::uint8_t { eq, at_least, at_most, more_than, less_than };

enum class BoolOp : std::uint8_t { and_, or_, and_not, or_not };

enum class Metric : std::uint8_t { core_rank, h_avg };

/// Text attributes usable by LONGEST/SHORTEST and LENGTH filters.
enum class TextAttribute : std::uint8_t { name, acronym, title, abstract_text, location };

enum class AuthoredMode : std::uint8_t { any, only, no };

struct Query;

/// Quoted literal standing for the entities it resolves to.
struct Literal {
  /// Concepts the literal may denote, in resolution order.
  std::vector<Concept> kinds;
  NameMatchMode mode = NameMatchMode::standard;
  std::vector<std::string> values;
  /// Written as a [..] list (keyword literals only).
  bool bracketed = false;
  SourceSpan span;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Argument position that takes either a nested query or a literal.
using EntityRef = std::variant<Literal, Box<Query>>;

enum class FilterKind : std::uint8_t {
  with_dblpkey,
  with_doi,
  with_isbn,
  with_volume,
  with_orcid,
  with_acronym,
  with_city,
  with_country,
  named,
  titled,
  with_year,
  about_keyword,
  about_terms,
  of,
  appeared_in,
  cited_by,
  references,
  edited_by,
  written_by,
  written_by_any,
  published_with,
  authored,
  edited,
  works_for,
  published_in,
  with_members,
  // Aggregating filters.
  most_references,
  most_citations,
  most_coauthors,
  extreme_metric,
  extreme_length,
  // Comparisons.
  metric_compare,
  length_compare,
  count_references,
  count_citations,
  count_coauthors,
};

std::string_view filter_kind_name(FilterKind k);
bool is_aggregating(FilterKind k);

struct FilterLeaf {
  FilterKind kind = FilterKind::with_dblpkey;
  /// String argument: attribute value, name pattern or search terms.
  std::string text;
  NameMatchMode mode = NameMatchMode::standard;
  Comparator comparator = Comparator::eq;
  std::uint64_t number = 0;
  /// METRIC COMP value given as a quoted string (e.g. "A*") instead of a number.
  bool value_is_string = false;
  /// ~n of an aggregating filter.
  std::optional<std::uint64_t> rank;
  /// MOST/HIGHEST/LONGEST are descending, LEAST/LOWEST/SHORTEST ascending.
  Direction direction = Direction::descending;
  Metric metric = Metric::core_rank;
  TextAttribute attribute = TextAttribute::name;
  AuthoredMode authored = AuthoredMode::any;
  bool distinct = false;
  /// Entity arguments; for scoped aggregates and counts, the optional scope.
  std::vector<EntityRef> args;
  SourceSpan span;

  friend bool operator==(const FilterLeaf&, const FilterLeaf&) = default;
};

struct FilterBinary;
using FilterExpr = std::variant<FilterLeaf, FilterBinary>;

struct FilterBinary {
  BoolOp op = BoolOp::and_;
  Box<FilterExpr> lhs;
  Box<FilterExpr> rhs;

  friend bool operator==(const FilterBinary&, const FilterBinary&) = default;
};

struct EntityQuery {
  Concept base = Concept::publication;
  Specialisation specialisation = Specialisation::none;
  std::optional<FilterExpr> filter;

  friend bool operator==(const EntityQuery&, const EntityQuery&) = default;
};

enum class AggregationKind : std::uint8_t {
  most_cited,
  newest,
  oldest,
  coauthors_of,
  most_publishing_in,
  most_researching_about,
  related_keywords_to,
  most_frequent_keywords_of,
  most_researching_institution,
};

std::string_view aggregation_kind_name(AggregationKind k);

struct AggregationQuery {
  AggregationKind kind = AggregationKind::most_cited;
  /// most_publishing_in: persons, venues. most_researching_*: subjects, keywords.
  /// related_keywords_to: seeds [, scope]. Others: the single argument.
  std::vector<EntityRef> args;

  friend bool operator==(const AggregationQuery&, const AggregationQuery&) = default;
};

enum class FunctionKind : std::uint8_t {
  count,
  core_ranks_for,
  alternative_names_for,
  most_frequent_attribute_of,
  attributes_of,
};

std::string_view function_kind_name(FunctionKind k);

struct FunctionQuery {
  FunctionKind kind = FunctionKind::count;
  /// count, most_frequent_attribute_of, attributes_of: the nested query.
  /// core_ranks_for: persons [, scope]. alternative_names_for: the entities.
  std::vector<EntityRef> args;
  /// Attribute names as written (lower-cased by the parser).
  std::vector<std::string> attributes;

  friend bool operator==(const FunctionQuery&, const FunctionQuery&) = default;
};

struct Query {
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> rank;
  std::variant<EntityQuery, AggregationQuery, FunctionQuery> body;
  SourceSpan span;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Concept of the entities a query returns; empty for general functions.
std::optional<Concept> query_concept(const Query& q);

}  // namespace schenql
