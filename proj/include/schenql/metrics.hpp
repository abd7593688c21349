#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schenql/corpus.hpp"

namespace schenql {

/// Largest h such that at least h of the counts are >= h.
std::int64_t h_index(std::span<const std::int64_t> citation_counts);

/// Exact non-negative fraction, used for H-AVG values.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Mean over active years of the per-year h-index.
///
/// `publications` pairs each publication year with its citation count; years
/// without publications do not contribute. Empty input yields 0.
Rational h_avg(std::span<const std::pair<std::int64_t, std::int64_t>> year_and_citations);

/// A* -> 4, A -> 3, B -> 2, C -> 1, absent -> 0.
int core_rank_ordinal(std::optional<CoreRank> rank);

enum class Direction : std::uint8_t { descending, ascending };

/// Score used for ranking; integral scores and H-AVG fractions share one type.
using Score = Rational;

template <typename Id>
struct BasicScoredItem {
  Id id;
  Score score;
};

using ScoredItem = BasicScoredItem<std::string>;

/// Orders items by score in `direction`, ties by id ascending.
template <typename Id>
void sort_scored(std::vector<BasicScoredItem<Id>>& items, Direction direction) {
  std::sort(items.begin(), items.end(), [direction](const auto& a, const auto& b) {
    if (a.score != b.score) {
      return direction == Direction::descending ? b.score < a.score : a.score < b.score;
    }
    return a.id < b.id;
  });
}

/// Competition ranking: an item's rank is one plus the number of items with a
/// strictly better score. Keeps every item of rank <= n, ordered by score in
/// `direction` and ties by id ascending. n = 0 keeps everything.
template <typename Id>
std::vector<Id> rank_restrict_items(std::vector<BasicScoredItem<Id>> items, std::uint64_t n,
                                    Direction direction) {
  sort_scored(items, direction);
  std::vector<Id> out;
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i == 0 || items[i].score != items[i - 1].score) rank = i + 1;
    if (n != 0 && rank > n) break;
    out.push_back(items[i].id);
  }
  return out;
}

std::vector<std::string> rank_restrict(std::vector<ScoredItem> items, std::uint64_t n, Direction direction);

}  // namespace schenql
