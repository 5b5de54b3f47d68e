#pragma once

// Extraction of (entity, sex, given names) records from a Wikidata truthy
// N-Triples dump.
//
// The dump is read twice. Pass one collects human markers (P31 -> Q5),
// given-name links (P735) and sex statements (P21 -> Q6581097 | Q6581072).
// Pass two resolves rdfs:label literals for the given-name items found in
// pass one. Memory is proportional to the number of entities carrying one of
// those facts plus the number of given-name items, not to the dump size.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "onomast/nt.hpp"

namespace onomast::extract {

// Numeric part of a Wikidata item identifier (Q42 -> 42).
using Qid = std::uint64_t;

std::string format_qid(Qid id);
std::optional<Qid> parse_qid(std::string_view text);  // "Q42" -> 42

namespace iri {
inline constexpr std::string_view kEntityPrefix = "http://www.wikidata.org/entity/";
inline constexpr std::string_view kDirectPrefix = "http://www.wikidata.org/prop/direct/";
inline constexpr std::string_view kInstanceOf = "http://www.wikidata.org/prop/direct/P31";
inline constexpr std::string_view kGivenName = "http://www.wikidata.org/prop/direct/P735";
inline constexpr std::string_view kSexOrGender = "http://www.wikidata.org/prop/direct/P21";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
}  // namespace iri

inline constexpr Qid kHuman = 5;
inline constexpr Qid kMale = 6581097;
inline constexpr Qid kFemale = 6581072;

enum class Sex : std::uint8_t { Male, Female };

char sex_code(Sex sex);  // 'M' | 'F'

struct HumanMarker {
  Qid entity = 0;
  friend bool operator==(const HumanMarker&, const HumanMarker&) = default;
};

struct GivenNameLink {
  Qid entity = 0;
  Qid name_item = 0;
  friend bool operator==(const GivenNameLink&, const GivenNameLink&) = default;
};

struct SexStatement {
  Qid entity = 0;
  Sex sex = Sex::Male;
  friend bool operator==(const SexStatement&, const SexStatement&) = default;
};

struct NameLabel {
  Qid name_item = 0;
  std::string label;
  std::string language;
  friend bool operator==(const NameLabel&, const NameLabel&) = default;
};

using RelevantFact = std::variant<HumanMarker, GivenNameLink, SexStatement, NameLabel>;

// Maps a statement to the fact it carries, if any. Labels are returned for
// every item subject; restricting them to given-name items is the job of
// the label pass.
std::optional<RelevantFact> filter_relevant(const nt::TripleView& triple);
std::optional<RelevantFact> filter_relevant(const nt::Triple& triple);

struct HumanEntityRecord {
  Qid entity = 0;
  std::vector<std::string> given_names;  // sorted, unique
  Sex sex = Sex::Male;

  friend bool operator==(const HumanEntityRecord&, const HumanEntityRecord&) = default;
};

struct ExtractionStats {
  std::uint64_t lines_read = 0;
  std::uint64_t lines_skipped_malformed = 0;
  std::uint64_t triples_matched = 0;
  std::uint64_t human_entities = 0;
  std::uint64_t entities_emitted = 0;
  std::uint64_t entities_dropped_no_label = 0;
  std::uint64_t entities_dropped_conflicting_sex = 0;
  std::uint64_t entities_dropped_no_sex = 0;
  std::uint64_t name_items = 0;
  std::uint64_t name_items_unlabelled = 0;
  // Language of the label chosen for each resolved given-name item.
  std::map<std::string, std::uint64_t> chosen_label_languages;

  friend bool operator==(const ExtractionStats&, const ExtractionStats&) = default;
};

struct ExtractOptions {
  std::string preferred_language = "en";
  unsigned threads = 1;
};

// Pass-one state: facts keyed by entity. Partial accumulators built over
// disjoint parts of the dump merge into the same result in any order.
class EntityAccumulator {
 public:
  struct Facts {
    bool human = false;
    bool male = false;
    bool female = false;
    std::vector<Qid> name_items;
  };

  void add(const RelevantFact& fact);
  void merge(EntityAccumulator&& other);

  std::uint64_t facts_added() const { return facts_added_; }
  const std::unordered_map<Qid, Facts>& entities() const { return entities_; }

  // Given-name items linked from human entities.
  std::unordered_set<Qid> wanted_name_items() const;

 private:
  std::unordered_map<Qid, Facts> entities_;
  std::uint64_t facts_added_ = 0;
};

// Pass-two state: best label per wanted given-name item.
//
// Preference: the configured language, then "mul", then the smallest
// language tag; ties within one tag go to the smallest label.
class LabelAccumulator {
 public:
  LabelAccumulator(const std::unordered_set<Qid>& wanted, std::string preferred_language);

  // Returns true when the label belonged to a wanted item.
  bool add(const NameLabel& label);
  void merge(LabelAccumulator&& other);

  struct Choice {
    std::string label;
    std::string language;
  };
  const std::unordered_map<Qid, Choice>& chosen() const { return chosen_; }

 private:
  bool better(const NameLabel& candidate, const Choice& current) const;

  const std::unordered_set<Qid>* wanted_;
  std::string preferred_;
  std::unordered_map<Qid, Choice> chosen_;
};

// Joins both passes into records sorted by entity id and fills the entity
// counters of `stats`.
std::vector<HumanEntityRecord> assemble_entities(const EntityAccumulator& entities,
                                                 const LabelAccumulator& labels,
                                                 ExtractionStats& stats);

// In-memory variant used by tests: pass-one and pass-two fact lists.
std::vector<HumanEntityRecord> assemble_entities(std::span<const RelevantFact> facts,
                                                 const ExtractOptions& options,
                                                 ExtractionStats& stats);

// Runs both passes over a dump file. Uncompressed dumps are split into
// line-aligned ranges and parsed by `options.threads` workers; gzip dumps
// are read sequentially. Throws InconsistencyError when pass two reads a
// different number of lines or bytes than pass one.
std::vector<HumanEntityRecord> extract_entities(const std::filesystem::path& dump,
                                                const ExtractOptions& options,
                                                ExtractionStats& stats);

struct EntityFileHeader {
  std::string dump_id;
  std::string dump_date;
};

// `qid<TAB>M|F<TAB>name1;name2;...` with '\\', tab, newline, CR and ';'
// inside names written as backslash escapes.
void write_entities_tsv(std::ostream& out, const EntityFileHeader& header,
                        std::span<const HumanEntityRecord> records);

struct EntityFile {
  EntityFileHeader header;
  std::vector<HumanEntityRecord> records;
};

EntityFile read_entities_tsv(std::istream& in);

void write_stats(std::ostream& out, const ExtractionStats& stats);

}  // namespace onomast::extract
