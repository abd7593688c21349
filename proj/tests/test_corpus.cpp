#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "schenql/corpus.hpp"
#include "schenql/text_match.hpp"

namespace schenql::testing {
namespace {

std::vector<std::string> keys(const Corpus& c, Concept k, const IndexList& ids) {
  std::vector<std::string> out;
  for (auto i : ids) out.emplace_back(c.key_of(k, i));
  return out;
}

EntityIndex pub(const char* key) { return *mini().find_publication(key); }
EntityIndex person(const char* key) { return *mini().find_person(key); }

class TempCorpusDir : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = std::filesystem::temp_directory_path() / ("schenql-corpus-" + std::to_string(rd()));
    std::filesystem::create_directories(dir_);
    write("venues.jsonl", R"({"kind":"journal","dblp_key":"journals/x","name":"X Journal","acronym":"XJ","aliases":[]})" "\n");
    write("institutions.jsonl", "");
    write("persons.jsonl", R"({"dblp_key":"p/a","primary_name":"Ann A","aliases":[],"affiliation_keys":[]})" "\n");
    write("publications.jsonl",
          R"({"dblp_key":"x/1","title":"One","year":2000,"pub_type":"article","venue_key":"journals/x","author_keys":["p/a"],"editor_keys":[],"reference_keys":[],"keywords":["k"]})"
          "\n");
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }

  std::string load_error() {
    try {
      load(dir_);
    } catch (const LoadError& e) {
      return e.what();
    }
    return "";
  }

  std::filesystem::path dir_;
};

TEST(Corpus, FixtureSizes) {
  const Corpus& c = mini();
  EXPECT_EQ(c.size(Concept::publication), 24u);
  EXPECT_EQ(c.size(Concept::person), 5u);
  EXPECT_EQ(c.size(Concept::conference), 1u);
  EXPECT_EQ(c.size(Concept::journal), 1u);
  EXPECT_EQ(c.size(Concept::institution), 2u);
  EXPECT_EQ(c.size(Concept::keyword), 7u);
  EXPECT_TRUE(c.dangling().empty());
}

TEST(Corpus, TablesAreSortedByKey) {
  const Corpus& c = mini();
  for (Concept k : {Concept::publication, Concept::person, Concept::conference, Concept::journal,
                    Concept::institution, Concept::keyword}) {
    auto ks = keys(c, k, c.all(k));
    EXPECT_TRUE(std::is_sorted(ks.begin(), ks.end())) << concept_name(k);
    for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_EQ(c.find(k, ks[i]), c.all(k)[i]);
  }
}

TEST(Corpus, DerivedIndexes) {
  const Corpus& c = mini();
  auto authors = keys(c, Concept::person, c.authors_of(pub("conf/jcdl/WangJ05")));
  EXPECT_EQ(authors, (std::vector<std::string>{"homepages/w/WeiWang", "homepages/j/AdamJatowt"}));
  // Wang98 is cited by WangJ05, BettsJ18 and WangJ20.
  auto citing = keys(c, Concept::publication, c.cited_by(pub("journals/jodl/Wang98")));
  EXPECT_EQ(citing, (std::vector<std::string>{"conf/jcdl/BettsJ18", "conf/jcdl/WangJ05", "journals/jodl/WangJ20"}));
  EXPECT_EQ(c.cited_by(pub("journals/jodl/WangJ20")).size(), 20u);
  EXPECT_EQ(keys(c, Concept::publication, c.edited_by(person("homepages/w/WeiWang"))),
            (std::vector<std::string>{"books/sp/BettsJ22"}));
  auto trier = *c.find_institution("inst/trier");
  EXPECT_EQ(keys(c, Concept::person, c.members_of(trier)),
            (std::vector<std::string>{"homepages/b/ChristineBetts", "homepages/w/WeiWang"}));
  auto jcdl = *c.find_venue("conf/jcdl");
  EXPECT_EQ(c.publications_in(jcdl).size(), 2u);
  EXPECT_FALSE(c.venue_of(pub("books/sp/BettsJ22")).has_value());
  EXPECT_EQ(c.venues()[jcdl].core_rank, CoreRank::a_star);
  EXPECT_FALSE(c.venues()[*c.find_venue("journals/jodl")].core_rank.has_value());
  auto dl = *c.find_keyword("digital libraries");
  EXPECT_EQ(c.publications_with(dl).size(), 4u);
}

TEST(Corpus, LabelsAndKeys) {
  const Corpus& c = mini();
  EXPECT_EQ(c.label_of(Concept::person, person("homepages/w/WeiWang0042")), "Wei Wang 0042");
  EXPECT_EQ(c.label_of(Concept::publication, pub("journals/jodl/Wang98")), "Metadata for Digital Libraries");
  EXPECT_EQ(c.label_of(Concept::journal, *c.find_venue("journals/jodl")), "International Journal on Digital Libraries");
  EXPECT_EQ(c.key_of(Concept::keyword, *c.find_keyword("dsql")), "dsql");
}

TEST(Corpus, ResolveByIdentifiers) {
  const Corpus& c = mini();
  auto one = [&](Concept k, std::string_view lit) { return keys(c, k, c.resolve_literal(k, lit, NameMatchMode::standard)); };
  EXPECT_EQ(one(Concept::publication, "conf/jcdl/BettsJ18"), (std::vector<std::string>{"conf/jcdl/BettsJ18"}));
  EXPECT_EQ(one(Concept::publication, "10.1145/jcdl.2018.042"), (std::vector<std::string>{"conf/jcdl/BettsJ18"}));
  EXPECT_EQ(one(Concept::person, "0000-0001-0042-0042"), (std::vector<std::string>{"homepages/w/WeiWang0042"}));
  EXPECT_EQ(one(Concept::conference, "jcdl"), (std::vector<std::string>{"conf/jcdl"}));
  EXPECT_TRUE(one(Concept::journal, "JCDL").empty());
  EXPECT_EQ(one(Concept::keyword, "Digital Libraries"), (std::vector<std::string>{"digital libraries"}));
  EXPECT_TRUE(one(Concept::person, "Nobody Here").empty());
}

TEST(Corpus, ResolveNamesAndAliases) {
  const Corpus& c = mini();
  auto res = [&](Concept k, std::string_view lit, NameMatchMode m) { return keys(c, k, c.resolve_literal(k, lit, m)); };
  // Standard mode drops the numeric suffix of the candidate.
  EXPECT_EQ(res(Concept::person, "Wei Wang", NameMatchMode::standard),
            (std::vector<std::string>{"homepages/w/WeiWang", "homepages/w/WeiWang0042"}));
  EXPECT_EQ(res(Concept::person, "Wei Wang", NameMatchMode::strict), (std::vector<std::string>{"homepages/w/WeiWang"}));
  EXPECT_EQ(res(Concept::person, "wang wei", NameMatchMode::fuzzy),
            (std::vector<std::string>{"homepages/l/WangWeiLee", "homepages/w/WeiWang", "homepages/w/WeiWang0042"}));
  EXPECT_EQ(res(Concept::person, "C. Betts", NameMatchMode::standard),
            (std::vector<std::string>{"homepages/b/ChristineBetts"}));
  EXPECT_EQ(res(Concept::institution, "UniPi", NameMatchMode::standard), (std::vector<std::string>{"inst/pisa"}));
  EXPECT_EQ(res(Concept::journal, "Int. J. Digit. Libr.", NameMatchMode::standard),
            (std::vector<std::string>{"journals/jodl"}));
  EXPECT_EQ(res(Concept::publication, "metadata", NameMatchMode::fuzzy),
            (std::vector<std::string>{"conf/jcdl/BettsJ18", "journals/jodl/Wang98"}));
}

TEST(TextMatch, NameModes) {
  EXPECT_TRUE(match_name("Wei Wang 0042", "wei wang", NameMatchMode::standard));
  EXPECT_FALSE(match_name("Wei Wang 0042", "Wei Wang", NameMatchMode::strict));
  EXPECT_TRUE(match_name("Wei Wang", "Wei Wang", NameMatchMode::strict));
  EXPECT_FALSE(match_name("Wei Wang", "wei wang", NameMatchMode::strict));
  EXPECT_TRUE(match_name("Wang Wei Lee", "wang wei", NameMatchMode::fuzzy));
  EXPECT_TRUE(match_name("Wei-Bo Wang", "wang wei", NameMatchMode::fuzzy));
  EXPECT_FALSE(match_name("Wei Zhang", "wang wei", NameMatchMode::fuzzy));
  EXPECT_FALSE(match_name("Wang Wei Lee", "wang wei", NameMatchMode::standard));
}

TEST(TextMatch, Helpers) {
  EXPECT_EQ(strip_name_suffix("Wei Wang 0042"), "Wei Wang");
  EXPECT_EQ(strip_name_suffix("Wei Wang"), "Wei Wang");
  EXPECT_EQ(utf8_length("Universität"), 11u);
  EXPECT_EQ(word_tokens("Self-Citation in Practice, Part 5"),
            (std::vector<std::string>{"self", "citation", "in", "practice", "part", "5"}));
  EXPECT_TRUE(iequals("JCDL", "jcdl"));
}

TEST(TextMatch, TermExpressions) {
  auto e = parse_terms("digital:libraries|dsql");
  EXPECT_TRUE(match_terms("Digital Libraries today", e));
  EXPECT_TRUE(match_terms("about dsql", e));
  EXPECT_FALSE(match_terms("digital humanities", e));
  EXPECT_EQ(render_terms(parse_terms("(a|b):c")), render_terms(parse_terms(render_terms(parse_terms("(a|b):c")))));
  EXPECT_EQ(term_words(parse_terms("a:b|a")), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(parse_terms("a:"), TermSyntaxError);
  EXPECT_THROW(parse_terms("(a|b"), TermSyntaxError);
}

TEST_F(TempCorpusDir, LoadsMinimalCorpus) {
  Corpus c = load(dir_);
  EXPECT_EQ(c.size(Concept::publication), 1u);
  EXPECT_EQ(c.size(Concept::journal), 1u);
}

TEST_F(TempCorpusDir, DanglingReferencesAreRecorded) {
  write("publications.jsonl",
        R"({"dblp_key":"x/1","title":"One","year":2000,"pub_type":"article","venue_key":"journals/none","author_keys":["p/a","p/ghost"],"editor_keys":[],"reference_keys":["x/9"],"keywords":[]})"
        "\n");
  Corpus c = load(dir_);
  ASSERT_EQ(c.dangling().size(), 3u);
  EXPECT_EQ(c.dangling()[0], (DanglingReference{"x/1", "author_keys", "p/ghost"}));
  EXPECT_EQ(c.authors_of(0).size(), 1u);
}

TEST_F(TempCorpusDir, DuplicateIdsNameBothLines) {
  write("persons.jsonl", R"({"dblp_key":"p/a","primary_name":"Ann A","aliases":[],"affiliation_keys":[]})" "\n"
                         R"({"dblp_key":"p/a","primary_name":"Ann B","aliases":[],"affiliation_keys":[]})" "\n");
  std::string e = load_error();
  EXPECT_NE(e.find("duplicate"), std::string::npos) << e;
  EXPECT_NE(e.find("1"), std::string::npos);
  EXPECT_NE(e.find("2"), std::string::npos);
}

TEST_F(TempCorpusDir, RejectsInvalidRecords) {
  write("publications.jsonl", "{not json}\n");
  EXPECT_NE(load_error().find("malformed JSON"), std::string::npos);
  write("publications.jsonl",
        R"({"dblp_key":"x/1","title":"One","year":-1,"pub_type":"article","author_keys":[],"editor_keys":[],"reference_keys":[],"keywords":[]})"
        "\n");
  EXPECT_NE(load_error().find("negative year"), std::string::npos);
  write("publications.jsonl",
        R"({"dblp_key":"x/1","title":"One","year":1,"pub_type":"article","author_keys":[],"editor_keys":[],"reference_keys":["x/1"],"keywords":[]})"
        "\n");
  EXPECT_NE(load_error().find("references itself"), std::string::npos);
  write("publications.jsonl",
        R"({"dblp_key":"x/1","title":"One","year":1,"pub_type":"poster","author_keys":[],"editor_keys":[],"reference_keys":[],"keywords":[]})"
        "\n");
  EXPECT_NE(load_error().find("pub_type"), std::string::npos);
  write("publications.jsonl",
        R"({"dblp_key":"x/1","title":"One","year":1,"pub_type":"article","author_keys":[],"editor_keys":[],"reference_keys":[],"keywords":["Upper"]})"
        "\n");
  EXPECT_NE(load_error().find("lowercase"), std::string::npos);
}

TEST_F(TempCorpusDir, CoreRanksFile) {
  write("core_ranks.csv", "acronym,rank\nXJ,B\n");
  EXPECT_EQ(load(dir_).venues()[0].core_rank, CoreRank::b);
  write("core_ranks.csv", "acronym,rank\nXJ,Z\n");
  EXPECT_NE(load_error().find("unknown rank"), std::string::npos);
  std::filesystem::remove(dir_ / "core_ranks.csv");
  EXPECT_FALSE(load(dir_).venues()[0].core_rank.has_value());
}

TEST_F(TempCorpusDir, MissingFile) {
  std::filesystem::remove(dir_ / "persons.jsonl");
  EXPECT_NE(load_error().find("persons.jsonl"), std::string::npos);
}

}  // namespace
}  // namespace schenql::testing
