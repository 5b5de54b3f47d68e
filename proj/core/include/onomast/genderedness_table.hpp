#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onomast/dump_extractor.hpp"
#include "onomast/name_normalizer.hpp"

namespace onomast::gender {

struct SexCounts {
  std::uint64_t male = 0;
  std::uint64_t female = 0;

  std::uint64_t total() const { return male + female; }

  SexCounts& operator+=(const SexCounts& other) {
    male += other.male;
    female += other.female;
    return *this;
  }
  friend SexCounts operator+(SexCounts a, const SexCounts& b) { return a += b; }
  friend bool operator==(const SexCounts&, const SexCounts&) = default;
};

// Share of male bearers of a name, kept as a reduced fraction in [0, 1].
// Ordering and equality are exact; to_double() is for emission only.
class Genderedness {
 public:
  Genderedness() = default;  // 0/1

  // Throws ContractViolation when den == 0 or num > den.
  static Genderedness from_ratio(std::uint64_t num, std::uint64_t den);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }
  double to_double() const;

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }

  friend bool operator==(const Genderedness&, const Genderedness&) = default;
  friend std::strong_ordering operator<=>(const Genderedness& a, const Genderedness& b) {
    const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

// male / (male + female). Throws ContractViolation on a zero total.
Genderedness score(const SexCounts& counts);

struct Provenance {
  std::string dump_id;
  std::string extraction_date;
  std::uint64_t entity_count = 0;
  std::uint64_t name_count = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Clean name -> sex counts. Entries always have a non-zero total.
class GenderTable {
 public:
  using Map = std::map<std::string, SexCounts, std::less<>>;

  void add(std::string_view name, const SexCounts& counts);
  const SexCounts* find(std::string_view name) const;

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<Provenance>& provenance() const { return provenance_; }
  void add_provenance(Provenance p) { provenance_.push_back(std::move(p)); }

 private:
  Map entries_;
  std::vector<Provenance> provenance_;
};

// Per-key sums; provenance lists are concatenated (a then b).
GenderTable merge_tables(const GenderTable& a, const GenderTable& b);

struct AccumulateStats {
  std::uint64_t entities_seen = 0;
  std::uint64_t entities_contributing = 0;
  std::uint64_t names_dropped_empty = 0;
};

// Counts each entity once per distinct clean given name. The returned table
// carries one provenance entry built from `source` plus the entity and name
// totals of this call.
GenderTable accumulate(std::span<const extract::HumanEntityRecord> records,
                       const names::NormalizerOptions& options,
                       const extract::EntityFileHeader& source = {},
                       AccumulateStats* stats = nullptr);

// `name<TAB>male<TAB>female` sorted by name, after a `#` provenance header.
void write_table_tsv(std::ostream& out, const GenderTable& table);
GenderTable read_table_tsv(std::istream& in);

}  // namespace onomast::gender
