#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "fixtures.hpp"
#include "schenql/service.hpp"

namespace schenql::testing {
namespace {

const Service& service() {
  static const Service s(mini());
  return s;
}

Json query(const std::string& q, int expected_status = 200, Json extra = Json::object()) {
  Json body{{"query", q}};
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  auto r = service().query(body.dump());
  EXPECT_EQ(r.status, expected_status) << q << "\n" << r.body.dump(2);
  return r.body;
}

TEST(Service, EntityQuery) {
  auto j = query(R"(COAUTHORS OF "Adam Jatowt")");
  const auto& r = j["result"];
  EXPECT_EQ(r["kind"], "entities");
  EXPECT_EQ(r["concept"], "person");
  EXPECT_EQ(r["total"], 3);
  EXPECT_EQ(r["rows"][0]["id"], "homepages/b/ChristineBetts");
  EXPECT_EQ(r["rows"][0]["label"], "Christine Betts");
  EXPECT_EQ(r["page"], 1);
  EXPECT_EQ(r["page_size"], kDefaultPageSize);
  EXPECT_TRUE(j["diagnostics"].empty());
  EXPECT_TRUE(j["timing"].contains("evaluate_ms"));
}

TEST(Service, Paging) {
  auto j = query("PUBLICATIONS", 200, {{"page", 3}, {"page_size", 10}});
  EXPECT_EQ(j["result"]["total"], 24);
  ASSERT_EQ(j["result"]["rows"].size(), 4u);
  EXPECT_EQ(j["result"]["rows"][3]["id"], "journals/jodl/WangJ20");
  EXPECT_TRUE(query("PUBLICATIONS", 200, {{"page", 9}})["result"]["rows"].empty());
}

TEST(Service, ScalarAndTable) {
  EXPECT_EQ(query("COUNT (PERSONS)")["result"]["value"], 5);
  auto t = query(R"(CORE RANKS FOR "Adam Jatowt")")["result"];
  EXPECT_EQ(t["kind"], "table");
  EXPECT_EQ(t["columns"], Json::parse(R"(["core_rank","count"])"));
  EXPECT_EQ(t["rows"], Json::parse(R"([["A*",2]])"));
}

TEST(Service, QueryErrors) {
  auto j = query("PERSONS )", 422);
  EXPECT_EQ(j["code"], "syntax_error");
  EXPECT_EQ(j["span"]["start"], 8);
  EXPECT_EQ(j["span"]["end"], 9);
  EXPECT_FALSE(j["expected"].empty());
  EXPECT_EQ(query("~3 PERSONS", 422)["code"], "semantic_error");
  EXPECT_EQ(query(R"(PERSONS NAMED "x)", 422)["code"], "lexical_error");

  auto w = query(R"(PUBLICATIONS WRITTEN BY "Nobody Here")");
  ASSERT_EQ(w["diagnostics"].size(), 1u);
  EXPECT_EQ(w["diagnostics"][0]["code"], "resolution_warning");
}

TEST(Service, BadRequests) {
  for (const char* body : {"", "[]", "{}", R"({"query": 3})", R"({"query": "PERSONS", "page": 0})",
                           R"({"query": "PERSONS", "page_size": 501})", R"({"query": "PERSONS", "page": "2"})"}) {
    auto r = service().query(body);
    EXPECT_EQ(r.status, 400) << body;
    EXPECT_EQ(r.body["code"], "bad_request") << body;
  }
}

TEST(Service, Suggest) {
  auto r = service().suggest("PERSONS NAMED");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["complete"], false);
  EXPECT_EQ(r.body["suggestions"][0], Json::parse(R"({"token":"\"STRING\"","category":"literal_placeholder"})"));
  auto bad = service().suggest(R"(PERSONS NAMED "x)");
  EXPECT_TRUE(bad.body["suggestions"].empty());
  EXPECT_EQ(bad.body["diagnostic"]["code"], "lexical_error");
}

TEST(Service, EntityRecords) {
  auto p = service().entity("person", "homepages/j/AdamJatowt");
  ASSERT_EQ(p.status, 200);
  EXPECT_EQ(p.body["name"], "Adam Jatowt");
  EXPECT_EQ(p.body["publication_count"], 4);
  EXPECT_EQ(p.body["citation_count"], 29);
  EXPECT_EQ(p.body["publications"][0]["key"], "books/sp/BettsJ22");
  EXPECT_EQ(p.body["keywords"][0], Json::parse(R"({"keyword":"digital libraries","count":3})"));
  EXPECT_EQ(p.body["affiliations"][0]["key"], "inst/pisa");

  auto pub = service().entity("publication", "journals/jodl/WangJ20");
  EXPECT_EQ(pub.body["citation_count"], 20);
  EXPECT_EQ(pub.body["reference_count"], 3);
  EXPECT_EQ(pub.body["venue"]["key"], "journals/jodl");

  auto inst = service().entity("institution", "inst/trier");
  EXPECT_EQ(inst.body["publication_count"], 10);
  EXPECT_EQ(service().entity("conference", "conf/jcdl").body["core_rank"], "A*");

  EXPECT_EQ(service().entity("journal", "conf/jcdl").status, 404);
  EXPECT_EQ(service().entity("keyword", "dsql").status, 404);
  EXPECT_EQ(service().entity("person", "homepages/x/Nobody").status, 404);
}

TEST(Service, EgoGraph) {
  auto r = service().ego("homepages/j/AdamJatowt", std::nullopt);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["center"]["name"], "Adam Jatowt");
  EXPECT_EQ(r.body["neighbors"], Json::parse(R"([
    {"key":"homepages/b/ChristineBetts","name":"Christine Betts","count":2},
    {"key":"homepages/w/WeiWang","name":"Wei Wang","count":1},
    {"key":"homepages/w/WeiWang0042","name":"Wei Wang 0042","count":1}])"));
  EXPECT_EQ(service().ego("homepages/j/AdamJatowt", "2").body["neighbors"].size(), 2u);
  EXPECT_TRUE(service().ego("homepages/l/WangWeiLee", std::nullopt).body["neighbors"].empty());
  EXPECT_EQ(service().ego("homepages/j/AdamJatowt", "-1").status, 400);
  EXPECT_EQ(service().ego("homepages/j/AdamJatowt", "two").status, 400);
  EXPECT_EQ(service().ego("nobody", std::nullopt).status, 404);
}

TEST(Service, BowTie) {
  auto r = service().bowtie("publication", "journals/jodl/WangJ20");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["subject"]["anchor_year"], 2020);
  EXPECT_EQ(r.body["reference_buckets"],
            Json::parse(R"([{"offset":-22,"count":1},{"offset":-15,"count":1},{"offset":-2,"count":1}])"));
  EXPECT_EQ(r.body["citation_buckets"], Json::parse(R"([{"offset":1,"count":6},{"offset":2,"count":6},
    {"offset":3,"count":4},{"offset":4,"count":4}])"));
  EXPECT_EQ(r.body["totals"], Json::parse(R"({"references":3,"citations":20})"));

  // Persons and venues aggregate over their publications.
  auto person = service().bowtie("person", "homepages/j/AdamJatowt");
  EXPECT_EQ(person.body["subject"]["anchor_year"], 2022);
  EXPECT_EQ(person.body["totals"], Json::parse(R"({"references":4,"citations":22})"));
  auto venue = service().bowtie("journal", "journals/jodl");
  EXPECT_EQ(venue.body["subject"]["anchor_year"], 2021);
  EXPECT_EQ(venue.body["totals"], Json::parse(R"({"references":4,"citations":23})"));

  auto empty = service().bowtie("person", "homepages/l/WangWeiLee");
  EXPECT_EQ(empty.status, 200);
  EXPECT_TRUE(empty.body["subject"]["anchor_year"].is_null());
  EXPECT_EQ(service().bowtie("institution", "inst/pisa").status, 422);
  EXPECT_EQ(service().bowtie("planet", "x").status, 400);
  EXPECT_EQ(service().bowtie("publication", "nope").status, 404);
}

// The same handlers behind a real socket.
class HttpServer : public ::testing::Test {
 protected:
  void SetUp() override {
    register_routes(server_, service());
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(HttpServer, Routes) {
  auto c = client();
  auto q = c.Post("/api/query", R"j({"query": "COUNT (PERSONS)"})j", "application/json");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->status, 200);
  EXPECT_EQ(q->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(Json::parse(q->body)["result"]["value"], 5);

  auto bad = c.Post("/api/query", "PERSONS", "text/plain");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto s = c.Get("/api/suggest?q=PERSONS%20NAMED");
  ASSERT_TRUE(s);
  EXPECT_EQ(Json::parse(s->body)["suggestions"].size(), 3u);

  auto e = c.Get("/api/entity/publication/journals/jodl/WangJ20");
  ASSERT_TRUE(e);
  EXPECT_EQ(e->status, 200);
  EXPECT_EQ(Json::parse(e->body)["year"], 2020);

  auto ego = c.Get("/api/ego/homepages/j/AdamJatowt?k=1");
  ASSERT_TRUE(ego);
  EXPECT_EQ(Json::parse(ego->body)["neighbors"].size(), 1u);

  auto bt = c.Get("/api/bowtie/publication/journals/jodl/WangJ20");
  ASSERT_TRUE(bt);
  EXPECT_EQ(Json::parse(bt->body)["totals"]["citations"], 20);

  auto missing = c.Get("/api/nothing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(Json::parse(missing->body)["code"], "not_found");
}

}  // namespace
}  // namespace schenql::testing
