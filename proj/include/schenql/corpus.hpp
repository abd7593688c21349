#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schenql {

/// The six queryable entity families.
enum class Concept : std::uint8_t {
  conference,
  journal,
  keyword,
  publication,
  person,
  institution,
};

std::string_view concept_name(Concept c);
std::optional<Concept> concept_from_name(std::string_view name);

enum class PubType : std::uint8_t {
  book,
  article,
  phdthesis,
  masterthesis,
  inproceeding,
  incollection,
  proceeding,
};

std::string_view pub_type_name(PubType t);
std::optional<PubType> pub_type_from_name(std::string_view name);

enum class VenueKind : std::uint8_t { conference, journal };

/// CORE grades; the underlying value is the comparison ordinal.
enum class CoreRank : std::uint8_t { c = 1, b = 2, a = 3, a_star = 4 };

std::string_view core_rank_name(CoreRank r);
std::optional<CoreRank> core_rank_from_name(std::string_view name);

/// How a name literal is matched: plain, `~` (tokens in any order) or `=` (exact).
enum class NameMatchMode : std::uint8_t { standard, fuzzy, strict };

struct Publication {
  std::string dblp_key;
  std::optional<std::string> doi;
  std::optional<std::string> isbn;
  std::string title;
  std::optional<std::string> abstract_text;
  std::int64_t year = 0;
  PubType pub_type = PubType::article;
  std::optional<std::string> venue_key;
  std::optional<std::string> volume;
  std::vector<std::string> author_keys;
  std::vector<std::string> editor_keys;
  std::vector<std::string> reference_keys;
  std::vector<std::string> keywords;
};

struct Person {
  std::string dblp_key;
  std::optional<std::string> orcid;
  std::string primary_name;
  std::vector<std::string> aliases;
  std::vector<std::string> affiliation_keys;
};

struct Venue {
  VenueKind kind = VenueKind::conference;
  std::string dblp_key;
  std::string name;
  std::string acronym;
  std::vector<std::string> aliases;
  std::optional<CoreRank> core_rank;
};

struct Institution {
  std::string dblp_key;
  std::string name;
  std::vector<std::string> aliases;
  std::optional<std::string> city;
  std::optional<std::string> country;
};

/// Raw records as read from disk, before validation and indexing.
struct CorpusRecords {
  std::vector<Publication> publications;
  std::vector<Person> persons;
  std::vector<Venue> venues;
  std::vector<Institution> institutions;
  /// acronym -> rank, joined onto venues.
  std::map<std::string, CoreRank> core_ranks;
};

/// An edge whose target key is not part of the corpus.
struct DanglingReference {
  std::string source_key;
  std::string field;
  std::string target_key;

  friend bool operator==(const DanglingReference&, const DanglingReference&) = default;
};

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EntityIndex = std::uint32_t;
using IndexList = std::vector<EntityIndex>;

/// Immutable, indexed bibliographic store.
///
/// Every table is sorted by dblp key, so the index order of an entity is also
/// its id order. Conferences and journals share the venue table. Keywords are
/// addressed by their position in the sorted keyword vocabulary.
class Corpus {
 public:
  Corpus() = default;

  /// Validates and indexes records; throws LoadError on invariant violations.
  static Corpus build(CorpusRecords records);

  std::span<const Publication> publications() const { return publications_; }
  std::span<const Person> persons() const { return persons_; }
  std::span<const Venue> venues() const { return venues_; }
  std::span<const Institution> institutions() const { return institutions_; }
  std::span<const std::string> keywords() const { return keywords_; }
  std::span<const DanglingReference> dangling() const { return dangling_; }

  std::optional<EntityIndex> find_publication(std::string_view key) const;
  std::optional<EntityIndex> find_person(std::string_view key) const;
  std::optional<EntityIndex> find_venue(std::string_view key) const;
  std::optional<EntityIndex> find_institution(std::string_view key) const;
  std::optional<EntityIndex> find_keyword(std::string_view keyword) const;

  /// Number of entities of a concept (conferences and journals counted apart).
  std::size_t size(Concept c) const;
  /// All entity indexes of a concept in id order.
  IndexList all(Concept c) const;
  /// Looks up an entity of the given concept by its id.
  std::optional<EntityIndex> find(Concept c, std::string_view key) const;
  std::string_view key_of(Concept c, EntityIndex i) const;
  /// Display label: title, primary name, venue name or the keyword itself.
  std::string_view label_of(Concept c, EntityIndex i) const;

  // Derived indexes. Every list is sorted and duplicate-free unless noted.
  const IndexList& authors_of(EntityIndex pub) const { return pub_authors_[pub]; }  // author order
  const IndexList& editors_of(EntityIndex pub) const { return pub_editors_[pub]; }
  const IndexList& references_of(EntityIndex pub) const { return pub_references_[pub]; }
  const IndexList& cited_by(EntityIndex pub) const { return pub_cited_by_[pub]; }
  const IndexList& keywords_of(EntityIndex pub) const { return pub_keywords_[pub]; }
  std::optional<EntityIndex> venue_of(EntityIndex pub) const { return pub_venue_[pub]; }
  const IndexList& authored_by(EntityIndex person) const { return person_authored_[person]; }
  const IndexList& edited_by(EntityIndex person) const { return person_edited_[person]; }
  const IndexList& affiliations_of(EntityIndex person) const { return person_affiliations_[person]; }
  const IndexList& members_of(EntityIndex inst) const { return institution_members_[inst]; }
  const IndexList& publications_in(EntityIndex venue) const { return venue_publications_[venue]; }
  const IndexList& publications_with(EntityIndex keyword) const { return keyword_publications_[keyword]; }

  /// Resolves a literal to the entities it identifies.
  ///
  /// Id-like readings permitted for the concept (dblp key, DOI, ORCID,
  /// acronym) are tried first; if none matches, names, titles and aliases are
  /// matched under `mode`. Keyword literals match lowercase keyword text.
  IndexList resolve_literal(Concept c, std::string_view literal, NameMatchMode mode) const;

  /// Name/title/alias matching only (the NAMED and TITLED filters).
  IndexList match_names(Concept c, std::string_view pattern, NameMatchMode mode) const;

 private:
  std::vector<Publication> publications_;
  std::vector<Person> persons_;
  std::vector<Venue> venues_;
  std::vector<Institution> institutions_;
  std::vector<std::string> keywords_;
  std::vector<DanglingReference> dangling_;

  std::map<std::string, EntityIndex, std::less<>> publication_ids_;
  std::map<std::string, EntityIndex, std::less<>> person_ids_;
  std::map<std::string, EntityIndex, std::less<>> venue_ids_;
  std::map<std::string, EntityIndex, std::less<>> institution_ids_;
  std::map<std::string, EntityIndex, std::less<>> keyword_ids_;

  std::vector<IndexList> pub_authors_;
  std::vector<IndexList> pub_editors_;
  std::vector<IndexList> pub_references_;
  std::vector<IndexList> pub_cited_by_;
  std::vector<IndexList> pub_keywords_;
  std::vector<std::optional<EntityIndex>> pub_venue_;
  std::vector<IndexList> person_authored_;
  std::vector<IndexList> person_edited_;
  std::vector<IndexList> person_affiliations_;
  std::vector<IndexList> institution_members_;
  std::vector<IndexList> venue_publications_;
  std::vector<IndexList> keyword_publications_;
  IndexList conference_ids_;
  IndexList journal_ids_;
};

/// Reads publications.jsonl, persons.jsonl, venues.jsonl, institutions.jsonl
/// and the optional core_ranks.csv from `data_dir`.
CorpusRecords read_records(const std::filesystem::path& data_dir);

/// read_records + Corpus::build.
Corpus load(const std::filesystem::path& data_dir);

}  // namespace schenql
