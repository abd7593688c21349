#include "schenql/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "schenql/text_match.hpp"

namespace schenql {

namespace {

using Json = nlohmann::json;

constexpr std::array<std::string_view, 6> kConceptNames = {
    "conference", "journal", "keyword", "publication", "person", "institution"};

constexpr std::array<std::string_view, 7> kPubTypeNames = {
    "book", "article", "phdthesis", "masterthesis", "inproceeding", "incollection", "proceeding"};

// Thrown by field accessors; converted to a LoadError carrying file and line.
struct FieldError {
  std::string message;
};

std::string required_string(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) throw FieldError{std::string("missing field '") + field + "'"};
  if (!it->is_string()) throw FieldError{std::string("field '") + field + "' must be a string"};
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw FieldError{std::string("field '") + field + "' must be a string"};
  return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) throw FieldError{std::string("field '") + field + "' must be an array"};
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw FieldError{std::string("field '") + field + "' must contain strings"};
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::int64_t required_int(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) throw FieldError{std::string("missing field '") + field + "'"};
  if (!it->is_number_integer()) throw FieldError{std::string("field '") + field + "' must be an integer"};
  return it->get<std::int64_t>();
}

Publication publication_from_json(const Json& obj) {
  Publication p;
  p.dblp_key = required_string(obj, "dblp_key");
  p.doi = optional_string(obj, "doi");
  p.isbn = optional_string(obj, "isbn");
  p.title = required_string(obj, "title");
  p.abstract_text = optional_string(obj, "abstract");
  p.year = required_int(obj, "year");
  auto type = required_string(obj, "pub_type");
  auto parsed = pub_type_from_name(type);
  if (!parsed) throw FieldError{"unknown pub_type '" + type + "'"};
  p.pub_type = *parsed;
  p.venue_key = optional_string(obj, "venue_key");
  p.volume = optional_string(obj, "volume");
  p.author_keys = string_list(obj, "author_keys");
  p.editor_keys = string_list(obj, "editor_keys");
  p.reference_keys = string_list(obj, "reference_keys");
  p.keywords = string_list(obj, "keywords");
  return p;
}

Person person_from_json(const Json& obj) {
  Person p;
  p.dblp_key = required_string(obj, "dblp_key");
  p.orcid = optional_string(obj, "orcid");
  p.primary_name = required_string(obj, "primary_name");
  p.aliases = string_list(obj, "aliases");
  p.affiliation_keys = string_list(obj, "affiliation_keys");
  return p;
}

Venue venue_from_json(const Json& obj) {
  Venue v;
  auto kind = required_string(obj, "kind");
  if (kind == "conference") {
    v.kind = VenueKind::conference;
  } else if (kind == "journal") {
    v.kind = VenueKind::journal;
  } else {
    throw FieldError{"unknown venue kind '" + kind + "'"};
  }
  v.dblp_key = required_string(obj, "dblp_key");
  v.name = required_string(obj, "name");
  v.acronym = required_string(obj, "acronym");
  v.aliases = string_list(obj, "aliases");
  if (auto rank = optional_string(obj, "core_rank")) {
    v.core_rank = core_rank_from_name(*rank);
    if (!v.core_rank) throw FieldError{"unknown core_rank '" + *rank + "'"};
  }
  return v;
}

Institution institution_from_json(const Json& obj) {
  Institution i;
  i.dblp_key = required_string(obj, "dblp_key");
  i.name = required_string(obj, "name");
  i.aliases = string_list(obj, "aliases");
  i.city = optional_string(obj, "city");
  i.country = optional_string(obj, "country");
  return i;
}

template <typename Record, typename Parse>
std::vector<Record> read_jsonl(const std::filesystem::path& dir, const std::string& file, Parse parse) {
  auto path = dir / file;
  std::ifstream in(path);
  if (!std::filesystem::is_regular_file(path) || !in) throw LoadError(file + " missing");
  std::vector<Record> out;
  std::map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      auto obj = Json::parse(line);
      if (!obj.is_object()) throw FieldError{"record must be a JSON object"};
      Record rec = parse(obj);
      auto [it, inserted] = first_line.emplace(rec.dblp_key, line_no);
      if (!inserted) {
        throw LoadError(file + ": duplicate id '" + rec.dblp_key + "' in records at lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
      }
      out.push_back(std::move(rec));
    } catch (const Json::parse_error& e) {
      throw LoadError(file + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    } catch (const FieldError& e) {
      throw LoadError(file + ":" + std::to_string(line_no) + ": " + e.message);
    }
  }
  return out;
}

std::map<std::string, CoreRank> read_core_ranks(const std::filesystem::path& dir) {
  auto path = dir / "core_ranks.csv";
  std::map<std::string, CoreRank> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path);
  if (!in) throw LoadError("core_ranks.csv unreadable");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "acronym,rank") throw LoadError("core_ranks.csv:1: expected header 'acronym,rank'");
      continue;
    }
    if (line.empty()) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) {
      throw LoadError("core_ranks.csv:" + std::to_string(line_no) + ": expected 'acronym,rank'");
    }
    auto rank = core_rank_from_name(std::string_view(line).substr(comma + 1));
    if (!rank) throw LoadError("core_ranks.csv:" + std::to_string(line_no) + ": unknown rank");
    out[line.substr(0, comma)] = *rank;
  }
  return out;
}

template <typename Record>
void sort_and_check_unique(std::vector<Record>& records, const char* what) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].dblp_key.empty()) {
      throw LoadError(std::string(what) + " record " + std::to_string(i) + " has an empty dblp_key");
    }
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return records[a].dblp_key < records[b].dblp_key; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (records[order[i]].dblp_key == records[order[i - 1]].dblp_key) {
      throw LoadError(std::string("duplicate ") + what + " id '" + records[order[i]].dblp_key + "' (records " +
                      std::to_string(order[i - 1]) + " and " + std::to_string(order[i]) + ")");
    }
  }
  std::vector<Record> sorted;
  sorted.reserve(records.size());
  for (auto i : order) sorted.push_back(std::move(records[i]));
  records = std::move(sorted);
}

template <typename Record>
std::map<std::string, EntityIndex, std::less<>> key_index(const std::vector<Record>& records) {
  std::map<std::string, EntityIndex, std::less<>> out;
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].dblp_key, static_cast<EntityIndex>(i));
  return out;
}

void sort_unique(IndexList& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool valid_person_name(std::string_view name) {
  auto space = name.rfind(' ');
  std::string_view last = space == std::string_view::npos ? name : name.substr(space + 1);
  bool all_digits = !last.empty() && std::all_of(last.begin(), last.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!all_digits || space == std::string_view::npos) return true;
  if (last.size() != 4) return false;
  return space > 0 && name[space - 1] != ' ';
}

template <typename Map>
std::optional<EntityIndex> lookup(const Map& m, std::string_view key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

// Non-person names have no numeric suffix to drop.
bool match_plain_name(std::string_view candidate, std::string_view pattern, NameMatchMode mode) {
  if (mode == NameMatchMode::standard) return iequals(candidate, pattern);
  return match_name(candidate, pattern, mode);
}

}  // namespace

std::string_view concept_name(Concept c) { return kConceptNames[static_cast<std::size_t>(c)]; }

std::optional<Concept> concept_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kConceptNames.size(); ++i) {
    if (kConceptNames[i] == name) return static_cast<Concept>(i);
  }
  return std::nullopt;
}

std::string_view pub_type_name(PubType t) { return kPubTypeNames[static_cast<std::size_t>(t)]; }

std::optional<PubType> pub_type_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPubTypeNames.size(); ++i) {
    if (kPubTypeNames[i] == name) return static_cast<PubType>(i);
  }
  return std::nullopt;
}

std::string_view core_rank_name(CoreRank r) {
  switch (r) {
    case CoreRank::a_star: return "A*";
    case CoreRank::a: return "A";
    case CoreRank::b: return "B";
    case CoreRank::c: return "C";
  }
  return "";
}

std::optional<CoreRank> core_rank_from_name(std::string_view name) {
  if (name == "A*") return CoreRank::a_star;
  if (name == "A") return CoreRank::a;
  if (name == "B") return CoreRank::b;
  if (name == "C") return CoreRank::c;
  return std::nullopt;
}

Corpus Corpus::build(CorpusRecords records) {
  Corpus c;
  sort_and_check_unique(records.publications, "publication");
  sort_and_check_unique(records.persons, "person");
  sort_and_check_unique(records.venues, "venue");
  sort_and_check_unique(records.institutions, "institution");

  for (const auto& p : records.publications) {
    if (p.year < 0) throw LoadError("publication '" + p.dblp_key + "' has a negative year");
    if (std::find(p.reference_keys.begin(), p.reference_keys.end(), p.dblp_key) != p.reference_keys.end()) {
      throw LoadError("publication '" + p.dblp_key + "' references itself");
    }
    std::set<std::string_view> seen;
    for (const auto& a : p.author_keys) {
      if (!seen.insert(a).second) {
        throw LoadError("publication '" + p.dblp_key + "' lists author '" + a + "' twice");
      }
    }
    for (const auto& k : p.keywords) {
      if (k.empty() || ascii_lower(k) != k) {
        throw LoadError("publication '" + p.dblp_key + "' has keyword '" + k + "' that is not lowercase");
      }
    }
  }
  for (const auto& p : records.persons) {
    if (p.primary_name.empty()) throw LoadError("person '" + p.dblp_key + "' has an empty primary_name");
    if (!valid_person_name(p.primary_name)) {
      throw LoadError("person '" + p.dblp_key + "' has a malformed numeric name suffix");
    }
  }
  for (auto& v : records.venues) {
    if (v.acronym.empty()) throw LoadError("venue '" + v.dblp_key + "' has an empty acronym");
    if (auto it = records.core_ranks.find(v.acronym); it != records.core_ranks.end()) v.core_rank = it->second;
  }
  for (const auto& i : records.institutions) {
    if (i.name.empty()) throw LoadError("institution '" + i.dblp_key + "' has an empty name");
  }

  c.publications_ = std::move(records.publications);
  c.persons_ = std::move(records.persons);
  c.venues_ = std::move(records.venues);
  c.institutions_ = std::move(records.institutions);
  c.publication_ids_ = key_index(c.publications_);
  c.person_ids_ = key_index(c.persons_);
  c.venue_ids_ = key_index(c.venues_);
  c.institution_ids_ = key_index(c.institutions_);

  std::set<std::string> vocabulary;
  for (const auto& p : c.publications_) vocabulary.insert(p.keywords.begin(), p.keywords.end());
  c.keywords_.assign(vocabulary.begin(), vocabulary.end());
  for (std::size_t i = 0; i < c.keywords_.size(); ++i) c.keyword_ids_.emplace(c.keywords_[i], static_cast<EntityIndex>(i));

  const auto npub = c.publications_.size();
  c.pub_authors_.resize(npub);
  c.pub_editors_.resize(npub);
  c.pub_references_.resize(npub);
  c.pub_cited_by_.resize(npub);
  c.pub_keywords_.resize(npub);
  c.pub_venue_.resize(npub);
  c.person_authored_.resize(c.persons_.size());
  c.person_edited_.resize(c.persons_.size());
  c.person_affiliations_.resize(c.persons_.size());
  c.institution_members_.resize(c.institutions_.size());
  c.venue_publications_.resize(c.venues_.size());
  c.keyword_publications_.resize(c.keywords_.size());

  auto dangle = [&c](const std::string& source, const char* field, const std::string& target) {
    c.dangling_.push_back(DanglingReference{source, field, target});
  };

  for (EntityIndex p = 0; p < npub; ++p) {
    const auto& pub = c.publications_[p];
    for (const auto& a : pub.author_keys) {
      if (auto i = lookup(c.person_ids_, a)) {
        c.pub_authors_[p].push_back(*i);
        c.person_authored_[*i].push_back(p);
      } else {
        dangle(pub.dblp_key, "author_keys", a);
      }
    }
    for (const auto& e : pub.editor_keys) {
      if (auto i = lookup(c.person_ids_, e)) {
        c.pub_editors_[p].push_back(*i);
        c.person_edited_[*i].push_back(p);
      } else {
        dangle(pub.dblp_key, "editor_keys", e);
      }
    }
    for (const auto& r : pub.reference_keys) {
      if (auto i = lookup(c.publication_ids_, r)) {
        c.pub_references_[p].push_back(*i);
        c.pub_cited_by_[*i].push_back(p);
      } else {
        dangle(pub.dblp_key, "reference_keys", r);
      }
    }
    if (pub.venue_key) {
      if (auto v = lookup(c.venue_ids_, *pub.venue_key)) {
        c.pub_venue_[p] = *v;
        c.venue_publications_[*v].push_back(p);
      } else {
        dangle(pub.dblp_key, "venue_key", *pub.venue_key);
      }
    }
    for (const auto& k : pub.keywords) {
      auto i = c.keyword_ids_.at(k);
      c.pub_keywords_[p].push_back(i);
      c.keyword_publications_[i].push_back(p);
    }
  }
  for (EntityIndex i = 0; i < c.persons_.size(); ++i) {
    for (const auto& a : c.persons_[i].affiliation_keys) {
      if (auto inst = lookup(c.institution_ids_, a)) {
        c.person_affiliations_[i].push_back(*inst);
        c.institution_members_[*inst].push_back(i);
      } else {
        dangle(c.persons_[i].dblp_key, "affiliation_keys", a);
      }
    }
  }

  // Author order is meaningful; every other list is a set.
  for (auto& v : c.pub_editors_) sort_unique(v);
  for (auto& v : c.pub_references_) sort_unique(v);
  for (auto& v : c.pub_cited_by_) sort_unique(v);
  for (auto& v : c.pub_keywords_) sort_unique(v);
  for (auto& v : c.person_authored_) sort_unique(v);
  for (auto& v : c.person_edited_) sort_unique(v);
  for (auto& v : c.person_affiliations_) sort_unique(v);
  for (auto& v : c.institution_members_) sort_unique(v);
  for (auto& v : c.venue_publications_) sort_unique(v);
  for (auto& v : c.keyword_publications_) sort_unique(v);

  for (EntityIndex v = 0; v < c.venues_.size(); ++v) {
    (c.venues_[v].kind == VenueKind::conference ? c.conference_ids_ : c.journal_ids_).push_back(v);
  }
  return c;
}

std::optional<EntityIndex> Corpus::find_publication(std::string_view key) const { return lookup(publication_ids_, key); }
std::optional<EntityIndex> Corpus::find_person(std::string_view key) const { return lookup(person_ids_, key); }
std::optional<EntityIndex> Corpus::find_venue(std::string_view key) const { return lookup(venue_ids_, key); }
std::optional<EntityIndex> Corpus::find_institution(std::string_view key) const { return lookup(institution_ids_, key); }
std::optional<EntityIndex> Corpus::find_keyword(std::string_view keyword) const { return lookup(keyword_ids_, keyword); }

std::size_t Corpus::size(Concept c) const {
  switch (c) {
    case Concept::conference: return conference_ids_.size();
    case Concept::journal: return journal_ids_.size();
    case Concept::keyword: return keywords_.size();
    case Concept::publication: return publications_.size();
    case Concept::person: return persons_.size();
    case Concept::institution: return institutions_.size();
  }
  return 0;
}

IndexList Corpus::all(Concept c) const {
  switch (c) {
    case Concept::conference: return conference_ids_;
    case Concept::journal: return journal_ids_;
    default: break;
  }
  IndexList out(size(c));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<EntityIndex>(i);
  return out;
}

std::optional<EntityIndex> Corpus::find(Concept c, std::string_view key) const {
  switch (c) {
    case Concept::conference:
    case Concept::journal: {
      auto v = find_venue(key);
      auto want = c == Concept::conference ? VenueKind::conference : VenueKind::journal;
      if (v && venues_[*v].kind == want) return v;
      return std::nullopt;
    }
    case Concept::keyword: return find_keyword(key);
    case Concept::publication: return find_publication(key);
    case Concept::person: return find_person(key);
    case Concept::institution: return find_institution(key);
  }
  return std::nullopt;
}

std::string_view Corpus::key_of(Concept c, EntityIndex i) const {
  switch (c) {
    case Concept::conference:
    case Concept::journal: return venues_[i].dblp_key;
    case Concept::keyword: return keywords_[i];
    case Concept::publication: return publications_[i].dblp_key;
    case Concept::person: return persons_[i].dblp_key;
    case Concept::institution: return institutions_[i].dblp_key;
  }
  return {};
}

std::string_view Corpus::label_of(Concept c, EntityIndex i) const {
  switch (c) {
    case Concept::conference:
    case Concept::journal: return venues_[i].name;
    case Concept::keyword: return keywords_[i];
    case Concept::publication: return publications_[i].title;
    case Concept::person: return persons_[i].primary_name;
    case Concept::institution: return institutions_[i].name;
  }
  return {};
}

IndexList Corpus::match_names(Concept c, std::string_view pattern, NameMatchMode mode) const {
  IndexList out;
  if (pattern.empty()) return out;
  auto any_name = [&](std::string_view primary, const std::vector<std::string>& aliases, bool person) {
    auto m = [&](std::string_view cand) {
      return person ? match_name(cand, pattern, mode) : match_plain_name(cand, pattern, mode);
    };
    if (m(primary)) return true;
    return std::any_of(aliases.begin(), aliases.end(), [&](const std::string& a) { return m(a); });
  };
  switch (c) {
    case Concept::conference:
    case Concept::journal:
      for (auto v : all(c)) {
        if (any_name(venues_[v].name, venues_[v].aliases, false)) out.push_back(v);
      }
      break;
    case Concept::keyword:
      if (auto k = find_keyword(ascii_lower(pattern))) out.push_back(*k);
      break;
    case Concept::publication:
      for (EntityIndex p = 0; p < publications_.size(); ++p) {
        if (match_plain_name(publications_[p].title, pattern, mode)) out.push_back(p);
      }
      break;
    case Concept::person:
      for (EntityIndex p = 0; p < persons_.size(); ++p) {
        if (any_name(persons_[p].primary_name, persons_[p].aliases, true)) out.push_back(p);
      }
      break;
    case Concept::institution:
      for (EntityIndex i = 0; i < institutions_.size(); ++i) {
        if (any_name(institutions_[i].name, institutions_[i].aliases, false)) out.push_back(i);
      }
      break;
  }
  return out;
}

IndexList Corpus::resolve_literal(Concept c, std::string_view literal, NameMatchMode mode) const {
  IndexList out;
  if (literal.empty()) return out;
  switch (c) {
    case Concept::conference:
    case Concept::journal:
      if (auto v = find(c, literal)) return {*v};
      for (auto v : all(c)) {
        if (iequals(venues_[v].acronym, literal)) out.push_back(v);
      }
      break;
    case Concept::keyword: break;
    case Concept::publication:
      if (auto p = find_publication(literal)) return {*p};
      for (EntityIndex p = 0; p < publications_.size(); ++p) {
        if (publications_[p].doi && *publications_[p].doi == literal) out.push_back(p);
      }
      break;
    case Concept::person:
      if (auto p = find_person(literal)) return {*p};
      for (EntityIndex p = 0; p < persons_.size(); ++p) {
        if (persons_[p].orcid && *persons_[p].orcid == literal) out.push_back(p);
      }
      break;
    case Concept::institution:
      if (auto i = find_institution(literal)) return {*i};
      break;
  }
  if (!out.empty()) return out;
  return match_names(c, literal, mode);
}

CorpusRecords read_records(const std::filesystem::path& data_dir) {
  CorpusRecords r;
  r.publications = read_jsonl<Publication>(data_dir, "publications.jsonl", publication_from_json);
  r.persons = read_jsonl<Person>(data_dir, "persons.jsonl", person_from_json);
  r.venues = read_jsonl<Venue>(data_dir, "venues.jsonl", venue_from_json);
  r.institutions = read_jsonl<Institution>(data_dir, "institutions.jsonl", institution_from_json);
  r.core_ranks = read_core_ranks(data_dir);
  return r;
}

Corpus load(const std::filesystem::path& data_dir) { return Corpus::build(read_records(data_dir)); }

}  // namespace schenql
