#include "schenql/service.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include <httplib.h>

#include "schenql/parser.hpp"
#include "schenql/plan.hpp"

namespace schenql {

EgoGraphData ego_graph(const Corpus& corpus, EntityIndex person, std::size_t k) {
  const auto persons = corpus.persons();
  EgoGraphData out;
  out.key = persons[person].dblp_key;
  out.name = persons[person].primary_name;
  std::map<EntityIndex, std::int64_t> shared;
  for (auto p : corpus.authored_by(person)) {
    for (auto a : corpus.authors_of(p)) {
      if (a != person) ++shared[a];
    }
  }
  for (const auto& [a, n] : shared) out.neighbors.push_back({persons[a].dblp_key, persons[a].primary_name, n});
  std::sort(out.neighbors.begin(), out.neighbors.end(), [](const EgoNeighbor& a, const EgoNeighbor& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  if (out.neighbors.size() > k) out.neighbors.resize(k);
  return out;
}

BowTieData bowtie(const Corpus& corpus, Concept kind, EntityIndex subject) {
  IndexList pubs;
  switch (kind) {
    case Concept::publication: pubs = {subject}; break;
    case Concept::conference:
    case Concept::journal: pubs = corpus.publications_in(subject); break;
    case Concept::person: pubs = corpus.authored_by(subject); break;
    case Concept::institution:
    case Concept::keyword:
      throw std::invalid_argument(std::string(concept_name(kind)) + " has no citation structure");
  }
  const auto all = corpus.publications();
  BowTieData out;
  out.kind = kind;
  out.key = std::string(corpus.key_of(kind, subject));
  out.label = std::string(corpus.label_of(kind, subject));
  std::set<EntityIndex> referenced;
  std::set<EntityIndex> citing;
  for (auto p : pubs) {
    if (!out.anchor_year || all[p].year > *out.anchor_year) out.anchor_year = all[p].year;
    const auto& r = corpus.references_of(p);
    const auto& c = corpus.cited_by(p);
    referenced.insert(r.begin(), r.end());
    citing.insert(c.begin(), c.end());
  }
  std::map<std::int64_t, std::int64_t> refs;
  std::map<std::int64_t, std::int64_t> cites;
  for (auto r : referenced) ++refs[all[r].year - *out.anchor_year];
  for (auto c : citing) ++cites[all[c].year - *out.anchor_year];
  out.reference_total = static_cast<std::int64_t>(referenced.size());
  out.citation_total = static_cast<std::int64_t>(citing.size());
  for (const auto& [o, n] : refs) out.reference_buckets.push_back({o, n});
  for (const auto& [o, n] : cites) out.citation_buckets.push_back({o, n});
  return out;
}

Json to_json(const Diagnostic& d) {
  Json j{{"code", diagnostic_code_name(d.code)}, {"message", d.message}};
  if (d.span) j["span"] = {{"start", d.span->start}, {"end", d.span->end}};
  if (!d.expected.empty()) j["expected"] = d.expected;
  if (d.node) j["node"] = *d.node;
  return j;
}

Json to_json(const EgoGraphData& e) {
  Json neighbors = Json::array();
  for (const auto& n : e.neighbors) neighbors.push_back({{"key", n.key}, {"name", n.name}, {"count", n.count}});
  return {{"center", {{"key", e.key}, {"name", e.name}}}, {"neighbors", neighbors}};
}

Json to_json(const BowTieData& b) {
  auto buckets = [](const std::vector<AgeBucket>& xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back({{"offset", x.offset}, {"count", x.count}});
    return out;
  };
  Json subject{{"kind", concept_name(b.kind)}, {"key", b.key}, {"label", b.label}};
  subject["anchor_year"] = b.anchor_year ? Json(*b.anchor_year) : Json(nullptr);
  return {{"subject", subject},
          {"reference_buckets", buckets(b.reference_buckets)},
          {"citation_buckets", buckets(b.citation_buckets)},
          {"totals", {{"references", b.reference_total}, {"citations", b.citation_total}}}};
}

Json cell_to_json(const Cell& c) {
  if (const auto* n = std::get_if<std::int64_t>(&c)) return *n;
  return std::get<std::string>(c);
}

Json result_to_json(const ResultSet& r, const Corpus& corpus, std::size_t offset, std::size_t count) {
  Json j{{"kind", result_kind_name(r.kind)}};
  switch (r.kind) {
    case ResultKind::entities: {
      j["concept"] = concept_name(r.entity_concept);
      j["total"] = r.ids.size();
      Json rows = Json::array();
      for (std::size_t i = offset; i < r.ids.size() && i - offset < count; ++i) {
        rows.push_back({{"id", corpus.key_of(r.entity_concept, r.ids[i])},
                        {"label", corpus.label_of(r.entity_concept, r.ids[i])}});
      }
      j["rows"] = rows;
      break;
    }
    case ResultKind::scalar: j["value"] = r.scalar; break;
    case ResultKind::table: {
      j["columns"] = r.table.columns;
      j["total"] = r.table.rows.size();
      Json rows = Json::array();
      for (const auto& row : r.table.rows) {
        Json cells = Json::array();
        for (const auto& c : row) cells.push_back(cell_to_json(c));
        rows.push_back(cells);
      }
      j["rows"] = rows;
      break;
    }
  }
  return j;
}

QueryOutcome run_query(const Corpus& corpus, std::string_view text) {
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  QueryOutcome out;
  auto t0 = Clock::now();
  try {
    Query q = parse(text);
    auto t1 = Clock::now();
    out.timing.parse_ms = ms(t0, t1);
    LogicalPlan plan = lower(q, corpus);
    auto t2 = Clock::now();
    out.timing.lower_ms = ms(t1, t2);
    out.diagnostics = plan.warnings;
    out.result = evaluate(plan, corpus);
    out.timing.evaluate_ms = ms(t2, Clock::now());
  } catch (const QueryError& e) {
    out.diagnostics.insert(out.diagnostics.begin(), e.diagnostic());
  }
  return out;
}

Json query_response(const QueryOutcome& q, const Corpus& corpus, std::size_t page, std::size_t page_size) {
  Json diagnostics = Json::array();
  for (const auto& d : q.diagnostics) diagnostics.push_back(to_json(d));
  Json timing{{"parse_ms", q.timing.parse_ms}, {"lower_ms", q.timing.lower_ms}, {"evaluate_ms", q.timing.evaluate_ms}};
  if (!q.result) {
    Json j = to_json(q.diagnostics.front());
    j["diagnostics"] = diagnostics;
    j["timing"] = timing;
    return j;
  }
  std::size_t offset = (page - 1) * page_size;
  Json result = result_to_json(*q.result, corpus, offset, page_size);
  if (q.result->kind == ResultKind::entities) {
    result["page"] = page;
    result["page_size"] = page_size;
  }
  return {{"result", result}, {"diagnostics", diagnostics}, {"timing", timing}};
}

Json error_body(std::string_view code, std::string_view message) { return {{"code", code}, {"message", message}}; }

namespace {

Response bad_request(const std::string& message) { return {400, error_body("bad_request", message)}; }
Response not_found(const std::string& message) { return {404, error_body("not_found", message)}; }

std::optional<std::size_t> positive(const Json& v) {
  if (!v.is_number_integer()) return std::nullopt;
  auto n = v.get<std::int64_t>();
  if (n < 1) return std::nullopt;
  return static_cast<std::size_t>(n);
}

std::optional<Concept> entity_kind(std::string_view kind) {
  auto c = concept_from_name(kind);
  if (!c || *c == Concept::keyword) return std::nullopt;
  return c;
}

Json ref(const Corpus& corpus, Concept c, EntityIndex i) {
  return {{"key", corpus.key_of(c, i)}, {"label", corpus.label_of(c, i)}};
}

Json opt_json(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

/// Keyword counts over publications, count descending then keyword ascending.
Json keyword_histogram(const Corpus& corpus, const IndexList& pubs) {
  std::map<EntityIndex, std::int64_t> counts;
  for (auto p : pubs) {
    for (auto k : corpus.keywords_of(p)) ++counts[k];
  }
  std::vector<std::pair<EntityIndex, std::int64_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Json out = Json::array();
  for (const auto& [k, n] : sorted) out.push_back({{"keyword", corpus.keywords()[k]}, {"count", n}});
  return out;
}

/// Publications newest first, ties by key.
Json publication_list(const Corpus& corpus, IndexList pubs) {
  const auto all = corpus.publications();
  std::sort(pubs.begin(), pubs.end(), [&](EntityIndex a, EntityIndex b) {
    if (all[a].year != all[b].year) return all[a].year > all[b].year;
    return a < b;
  });
  Json out = Json::array();
  for (auto p : pubs) {
    out.push_back({{"key", all[p].dblp_key},
                   {"title", all[p].title},
                   {"year", all[p].year},
                   {"citations", corpus.cited_by(p).size()}});
  }
  return out;
}

Json entity_record(const Corpus& corpus, Concept c, EntityIndex i) {
  Json j{{"kind", concept_name(c)}, {"key", corpus.key_of(c, i)}};
  switch (c) {
    case Concept::publication: {
      const auto& p = corpus.publications()[i];
      j["title"] = p.title;
      j["year"] = p.year;
      j["type"] = pub_type_name(p.pub_type);
      j["doi"] = opt_json(p.doi);
      j["isbn"] = opt_json(p.isbn);
      j["abstract"] = opt_json(p.abstract_text);
      j["volume"] = opt_json(p.volume);
      auto v = corpus.venue_of(i);
      j["venue"] = v ? ref(corpus, corpus.venues()[*v].kind == VenueKind::conference ? Concept::conference
                                                                                       : Concept::journal,
                           *v)
                     : Json(nullptr);
      Json authors = Json::array();
      for (auto a : corpus.authors_of(i)) authors.push_back(ref(corpus, Concept::person, a));
      j["authors"] = authors;
      Json editors = Json::array();
      for (auto e : corpus.editors_of(i)) editors.push_back(ref(corpus, Concept::person, e));
      j["editors"] = editors;
      Json keywords = Json::array();
      for (auto k : corpus.keywords_of(i)) keywords.push_back(corpus.keywords()[k]);
      j["keywords"] = keywords;
      Json refs = Json::array();
      for (auto r : corpus.references_of(i)) refs.push_back(corpus.key_of(Concept::publication, r));
      j["references"] = refs;
      Json cites = Json::array();
      for (auto r : corpus.cited_by(i)) cites.push_back(corpus.key_of(Concept::publication, r));
      j["citations"] = cites;
      j["reference_count"] = refs.size();
      j["citation_count"] = cites.size();
      break;
    }
    case Concept::person: {
      const auto& p = corpus.persons()[i];
      j["name"] = p.primary_name;
      j["orcid"] = opt_json(p.orcid);
      j["aliases"] = p.aliases;
      Json affiliations = Json::array();
      for (auto a : corpus.affiliations_of(i)) affiliations.push_back(ref(corpus, Concept::institution, a));
      j["affiliations"] = affiliations;
      const auto& pubs = corpus.authored_by(i);
      std::int64_t citations = 0;
      for (auto x : pubs) citations += static_cast<std::int64_t>(corpus.cited_by(x).size());
      j["publication_count"] = pubs.size();
      j["citation_count"] = citations;
      j["publications"] = publication_list(corpus, pubs);
      j["keywords"] = keyword_histogram(corpus, pubs);
      break;
    }
    case Concept::conference:
    case Concept::journal: {
      const auto& v = corpus.venues()[i];
      j["name"] = v.name;
      j["acronym"] = v.acronym;
      j["aliases"] = v.aliases;
      j["core_rank"] = v.core_rank ? Json(core_rank_name(*v.core_rank)) : Json(nullptr);
      const auto& pubs = corpus.publications_in(i);
      j["publication_count"] = pubs.size();
      j["publications"] = publication_list(corpus, pubs);
      j["keywords"] = keyword_histogram(corpus, pubs);
      break;
    }
    case Concept::institution: {
      const auto& inst = corpus.institutions()[i];
      j["name"] = inst.name;
      j["city"] = opt_json(inst.city);
      j["country"] = opt_json(inst.country);
      j["aliases"] = inst.aliases;
      Json members = Json::array();
      std::set<EntityIndex> pubs;
      for (auto m : corpus.members_of(i)) {
        members.push_back(ref(corpus, Concept::person, m));
        const auto& a = corpus.authored_by(m);
        pubs.insert(a.begin(), a.end());
      }
      j["members"] = members;
      IndexList list(pubs.begin(), pubs.end());
      j["publication_count"] = list.size();
      j["publications"] = publication_list(corpus, list);
      j["keywords"] = keyword_histogram(corpus, list);
      break;
    }
    case Concept::keyword: break;
  }
  return j;
}

/// Venue keys are shared by conferences and journals; the kind must match.
std::optional<EntityIndex> find_entity(const Corpus& corpus, Concept c, std::string_view key) {
  auto i = corpus.find(c, key);
  if (!i) return std::nullopt;
  if (c == Concept::conference || c == Concept::journal) {
    auto want = c == Concept::conference ? VenueKind::conference : VenueKind::journal;
    if (corpus.venues()[*i].kind != want) return std::nullopt;
  }
  return i;
}

}  // namespace

Response Service::query(std::string_view body) const {
  Json req = Json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return bad_request("body is not a JSON object");
  if (!req.contains("query") || !req["query"].is_string()) return bad_request("'query' must be a string");
  std::size_t page = 1;
  std::size_t page_size = kDefaultPageSize;
  if (req.contains("page")) {
    auto p = positive(req["page"]);
    if (!p) return bad_request("'page' must be a positive integer");
    page = *p;
  }
  if (req.contains("page_size")) {
    auto s = positive(req["page_size"]);
    if (!s || *s > kMaxPageSize) return bad_request("'page_size' must be an integer in [1, 500]");
    page_size = *s;
  }
  if (page > (std::numeric_limits<std::size_t>::max() / page_size)) return bad_request("'page' is too large");
  QueryOutcome q = run_query(corpus_, req["query"].get<std::string>());
  return {q.result ? 200 : 422, query_response(q, corpus_, page, page_size)};
}

Response Service::suggest(std::string_view prefix) const {
  SuggestResult s = schenql::suggest(prefix);
  Json list = Json::array();
  for (const auto& x : s.suggestions) {
    list.push_back({{"token", x.token}, {"category", suggestion_category_name(x.category)}});
  }
  Json j{{"suggestions", list}, {"complete", s.complete}};
  if (s.diagnostic) j["diagnostic"] = to_json(*s.diagnostic);
  return {200, j};
}

Response Service::entity(std::string_view kind, std::string_view key) const {
  auto c = entity_kind(kind);
  if (!c) return not_found("unknown entity kind '" + std::string(kind) + "'");
  auto i = find_entity(corpus_, *c, key);
  if (!i) return not_found("no " + std::string(kind) + " with key '" + std::string(key) + "'");
  return {200, entity_record(corpus_, *c, *i)};
}

Response Service::ego(std::string_view person, std::optional<std::string_view> k) const {
  std::size_t limit = 10;
  if (k) {
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(k->data(), k->data() + k->size(), v);
    if (ec != std::errc() || end != k->data() + k->size()) return bad_request("'k' must be a non-negative integer");
    limit = v;
  }
  auto i = corpus_.find_person(person);
  if (!i) return not_found("no person with key '" + std::string(person) + "'");
  return {200, to_json(ego_graph(corpus_, *i, limit))};
}

Response Service::bowtie(std::string_view kind, std::string_view key) const {
  auto c = entity_kind(kind);
  if (!c) return bad_request("unknown entity kind '" + std::string(kind) + "'");
  auto i = find_entity(corpus_, *c, key);
  if (!i) return not_found("no " + std::string(kind) + " with key '" + std::string(key) + "'");
  if (*c == Concept::institution) {
    return {422, error_body("unsupported_kind", "institutions have no citation structure")};
  }
  return {200, to_json(schenql::bowtie(corpus_, *c, *i))};
}

void register_routes(httplib::Server& server, const Service& service) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/api/query", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.query(req.body));
  });
  server.Get("/api/suggest", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.suggest(req.get_param_value("q")));
  });
  server.Get(R"(/api/entity/([a-z]+)/(.+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.entity(req.matches[1].str(), req.matches[2].str()));
  });
  server.Get(R"(/api/ego/(.+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> k;
    if (req.has_param("k")) k = req.get_param_value("k");
    reply(res, service.ego(req.matches[1].str(), k ? std::optional<std::string_view>(*k) : std::nullopt));
  });
  server.Get(R"(/api/bowtie/([a-z]+)/(.+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.bowtie(req.matches[1].str(), req.matches[2].str()));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    std::string code = res.status == 404 ? "not_found" : "http_" + std::to_string(res.status);
    res.set_content(error_body(code, httplib::status_message(res.status)).dump(), "application/json");
  });
}

bool serve(const Corpus& corpus, const std::string& host, int port) {
  httplib::Server server;
  Service service(corpus);
  register_routes(server, service);
  return server.listen(host, port);
}

}  // namespace schenql
