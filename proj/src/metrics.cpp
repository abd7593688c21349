#include "schenql/metrics.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace schenql {

std::int64_t h_index(std::span<const std::int64_t> citation_counts) {
  std::vector<std::int64_t> sorted(citation_counts.begin(), citation_counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t h = 0;
  while (h < static_cast<std::int64_t>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
  return h;
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  auto g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  auto lhs = static_cast<__int128>(a.num_) * b.den_;
  auto rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational h_avg(std::span<const std::pair<std::int64_t, std::int64_t>> year_and_citations) {
  std::map<std::int64_t, std::vector<std::int64_t>> by_year;
  for (const auto& [year, citations] : year_and_citations) by_year[year].push_back(citations);
  if (by_year.empty()) return Rational(0);
  std::int64_t total = 0;
  for (const auto& [year, counts] : by_year) total += h_index(counts);
  return Rational(total, static_cast<std::int64_t>(by_year.size()));
}

int core_rank_ordinal(std::optional<CoreRank> rank) { return rank ? static_cast<int>(*rank) : 0; }

std::vector<std::string> rank_restrict(std::vector<ScoredItem> items, std::uint64_t n, Direction direction) {
  return rank_restrict_items(std::move(items), n, direction);
}

}  // namespace schenql
