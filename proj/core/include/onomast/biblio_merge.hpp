#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onomast/genderedness_table.hpp"
#include "onomast/name_normalizer.hpp"

namespace onomast::biblio {

enum class Role : std::uint8_t { Single, First, Middle, Last, Corresponding };

inline constexpr std::array<Role, 5> kAllRoles = {Role::Single, Role::First, Role::Middle,
                                                  Role::Last, Role::Corresponding};

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);  // case-insensitive

struct AuthorshipRecord {
  std::string article_id;
  Role role = Role::Single;
  std::string raw_first_name;
  std::uint64_t citations = 0;
  std::optional<int> year;

  friend bool operator==(const AuthorshipRecord&, const AuthorshipRecord&) = default;
};

struct IngestOptions {
  std::optional<std::pair<int, int>> year_range;  // inclusive
};

struct IngestStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_skipped_invalid = 0;
  std::uint64_t rows_filtered_year = 0;

  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

// Reads the authorship CSV (header `article_id,role,first_name,citations`
// plus optional `year`, any column order, RFC 4180 quoting). Throws
// FormatError when a required column is missing.
std::vector<AuthorshipRecord> ingest(std::istream& in, const IngestOptions& options,
                                     IngestStats& stats);

// Applies the corresponding-author default to the records of one article:
// without an explicit corresponding author, every single author (or, if
// there is none, every first author) is duplicated with role Corresponding.
std::vector<AuthorshipRecord> derive_corresponding(std::span<const AuthorshipRecord> article);

struct GroupStats {
  std::uint64_t articles = 0;
  std::uint64_t articles_dropped_inconsistent = 0;
  std::uint64_t corresponding_derived = 0;

  friend bool operator==(const GroupStats&, const GroupStats&) = default;
};

// Groups by article_id (first-appearance order) and runs derive_corresponding
// on each group. Articles whose records disagree on citations, or that mix a
// single author with other non-corresponding authors, are dropped.
std::vector<AuthorshipRecord> apply_corresponding_default(std::span<const AuthorshipRecord> records,
                                                          GroupStats& stats);

struct ScoredAuthorship {
  AuthorshipRecord record;
  names::CleanName clean_name;
  gender::SexCounts sex_counts;
  gender::Genderedness genderedness;
};

struct AttachStats {
  std::uint64_t matched = 0;
  std::uint64_t matched_full_name = 0;
  std::uint64_t matched_first_token = 0;
  std::uint64_t unmatched = 0;
  std::uint64_t emptied_by_cleaning = 0;

  AttachStats& operator+=(const AttachStats& other);
  friend bool operator==(const AttachStats&, const AttachStats&) = default;
};

// Two-step lookup: the full clean name, then (compound names only) its first
// token. Counts of every hit are summed. Returns nothing when the name cleans
// to empty or neither lookup hits.
std::optional<ScoredAuthorship> attach_genderedness(const AuthorshipRecord& record,
                                                    const gender::GenderTable& table,
                                                    const names::NormalizerOptions& options = {},
                                                    AttachStats* stats = nullptr);

struct RoleBucket {
  std::set<std::string> types;
  std::uint64_t tokens = 0;
  std::uint64_t articles = 0;
  std::uint64_t citations = 0;
};

struct RoleDataset {
  Role role = Role::Single;
  std::map<gender::Genderedness, RoleBucket> buckets;
};

RoleDataset build_role_dataset(std::span<const ScoredAuthorship> scored, Role role);

// `genderedness_num<TAB>genderedness_den<TAB>types<TAB>tokens<TAB>articles<TAB>citations`
// ascending by genderedness, after a `#` header naming the role.
void write_merged_tsv(std::ostream& out, const RoleDataset& dataset);

}  // namespace onomast::biblio
