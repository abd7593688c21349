#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "schenql/corpus.hpp"
#include "schenql/diagnostic.hpp"
#include "schenql/evaluator.hpp"

namespace httplib {
class Server;
}

namespace schenql {

using Json = nlohmann::ordered_json;

struct EgoNeighbor {
  std::string key;
  std::string name;
  std::int64_t count = 0;
};

struct EgoGraphData {
  std::string key;
  std::string name;
  /// Count descending, then key ascending; the center is never included.
  std::vector<EgoNeighbor> neighbors;
};

struct AgeBucket {
  std::int64_t offset = 0;
  std::int64_t count = 0;
};

/// Year offsets of the distinct publications referenced by and citing the
/// subject, relative to the anchor year. Venues and persons aggregate over
/// their publications.
struct BowTieData {
  Concept kind = Concept::publication;
  std::string key;
  std::string label;
  /// Publication year, or the latest year for aggregated subjects; absent
  /// when a person or venue has no publications.
  std::optional<std::int64_t> anchor_year;
  /// Offsets ascending; reference offsets are usually negative.
  std::vector<AgeBucket> reference_buckets;
  std::vector<AgeBucket> citation_buckets;
  std::int64_t reference_total = 0;
  std::int64_t citation_total = 0;
};

EgoGraphData ego_graph(const Corpus& corpus, EntityIndex person, std::size_t k);
/// Throws std::invalid_argument for institutions and keywords.
BowTieData bowtie(const Corpus& corpus, Concept kind, EntityIndex subject);

Json to_json(const Diagnostic& d);
Json to_json(const EgoGraphData& e);
Json to_json(const BowTieData& b);
Json cell_to_json(const Cell& c);

/// Result record: kind, concept, total and the rows in [offset, offset + count).
Json result_to_json(const ResultSet& r, const Corpus& corpus, std::size_t offset, std::size_t count);

struct Timing {
  double parse_ms = 0;
  double lower_ms = 0;
  double evaluate_ms = 0;
};

/// Outcome of parse, lower and evaluate on one query string.
struct QueryOutcome {
  std::optional<ResultSet> result;
  /// Warnings on success, the error first on failure.
  std::vector<Diagnostic> diagnostics;
  Timing timing;
};

QueryOutcome run_query(const Corpus& corpus, std::string_view text);

/// Body shared by POST /api/query and the CLI's json output.
Json query_response(const QueryOutcome& q, const Corpus& corpus, std::size_t page, std::size_t page_size);

struct Response {
  int status = 200;
  Json body;
};

inline constexpr std::size_t kDefaultPageSize = 50;
inline constexpr std::size_t kMaxPageSize = 500;

/// Request handlers over one immutable corpus; safe to call concurrently.
class Service {
 public:
  explicit Service(const Corpus& corpus) : corpus_(corpus) {}

  /// POST /api/query with a JSON body {query, page?, page_size?}; pages start at 1.
  Response query(std::string_view body) const;
  /// GET /api/suggest?q=
  Response suggest(std::string_view prefix) const;
  /// GET /api/entity/{kind}/{key}
  Response entity(std::string_view kind, std::string_view key) const;
  /// GET /api/ego/{person}?k=; `k` is the raw parameter if given.
  Response ego(std::string_view person, std::optional<std::string_view> k) const;
  /// GET /api/bowtie/{kind}/{key}
  Response bowtie(std::string_view kind, std::string_view key) const;

 private:
  const Corpus& corpus_;
};

Json error_body(std::string_view code, std::string_view message);

/// Installs the /api routes on `server`.
void register_routes(httplib::Server& server, const Service& service);

/// Blocks serving on host:port; returns false if the socket cannot be bound.
bool serve(const Corpus& corpus, const std::string& host, int port);

}  // namespace schenql
