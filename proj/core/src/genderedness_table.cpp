#include "onomast/genderedness_table.hpp"

#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "onomast/errors.hpp"

namespace onomast::gender {
namespace {

std::optional<std::uint64_t> parse_count(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool valid_key(std::string_view name) {
  if (name.empty() || name.front() == ' ' || name.back() == ' ') return false;
  char prev = 'x';
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == ' ';
    if (!ok || (c == ' ' && prev == ' ')) return false;
    prev = c;
  }
  return true;
}

}  // namespace

Genderedness Genderedness::from_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw ContractViolation("genderedness: zero denominator");
  if (num > den) throw ContractViolation("genderedness: numerator exceeds denominator");
  const std::uint64_t d = std::gcd(num, den);
  Genderedness g;
  g.num_ = num / d;
  g.den_ = den / d;
  return g;
}

double Genderedness::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Genderedness score(const SexCounts& counts) {
  if (counts.total() == 0) throw ContractViolation("score: name has no male or female bearer");
  return Genderedness::from_ratio(counts.male, counts.total());
}

void GenderTable::add(std::string_view name, const SexCounts& counts) {
  if (counts.total() == 0) return;
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    entries_.emplace(std::string(name), counts);
  } else {
    it->second += counts;
  }
}

const SexCounts* GenderTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

GenderTable merge_tables(const GenderTable& a, const GenderTable& b) {
  GenderTable out = a;
  for (const auto& [name, counts] : b.entries()) out.add(name, counts);
  for (const auto& p : b.provenance()) out.add_provenance(p);
  return out;
}

GenderTable accumulate(std::span<const extract::HumanEntityRecord> records,
                       const names::NormalizerOptions& options,
                       const extract::EntityFileHeader& source, AccumulateStats* stats) {
  GenderTable table;
  AccumulateStats local;
  std::set<std::string> distinct;
  for (const auto& record : records) {
    ++local.entities_seen;
    distinct.clear();
    for (const auto& raw : record.given_names) {
      if (auto name = names::clean(raw, options)) {
        distinct.insert(name->text());
      } else {
        ++local.names_dropped_empty;
      }
    }
    if (distinct.empty()) continue;
    ++local.entities_contributing;
    const SexCounts one = record.sex == extract::Sex::Male ? SexCounts{1, 0} : SexCounts{0, 1};
    for (const auto& name : distinct) table.add(name, one);
  }
  if (!records.empty()) {
    table.add_provenance(
        Provenance{source.dump_id, source.dump_date, local.entities_contributing, table.size()});
  }
  if (stats) {
    stats->entities_seen += local.entities_seen;
    stats->entities_contributing += local.entities_contributing;
    stats->names_dropped_empty += local.names_dropped_empty;
  }
  return table;
}

void write_table_tsv(std::ostream& out, const GenderTable& table) {
  out << "# format_version\t1\n";
  for (const auto& p : table.provenance()) {
    out << "# source\t" << p.dump_id << '\t' << p.extraction_date << '\t' << p.entity_count << '\t'
        << p.name_count << '\n';
  }
  out << "# name\tmale\tfemale\n";
  for (const auto& [name, counts] : table.entries()) {
    out << name << '\t' << counts.male << '\t' << counts.female << '\n';
  }
}

GenderTable read_table_tsv(std::istream& in) {
  GenderTable table;
  std::string line;
  std::size_t line_no = 0;
  bool versioned = false;
  std::string previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view meta(line);
      meta.remove_prefix(1);
      while (!meta.empty() && meta.front() == ' ') meta.remove_prefix(1);
      const auto fields = split_tabs(meta);
      if (fields[0] == "format_version") {
        if (fields.size() != 2 || fields[1] != "1") {
          throw FormatError("gender table: unsupported format_version");
        }
        versioned = true;
      } else if (fields[0] == "source") {
        if (fields.size() != 5) throw FormatError("gender table: malformed source line");
        auto entities = parse_count(fields[3]);
        auto names = parse_count(fields[4]);
        if (!entities || !names) throw FormatError("gender table: malformed source line");
        table.add_provenance(
            Provenance{std::string(fields[1]), std::string(fields[2]), *entities, *names});
      }
      continue;
    }
    const auto fields = split_tabs(line);
    const std::string where = "gender table line " + std::to_string(line_no);
    if (fields.size() != 3) throw FormatError(where + ": expected 3 fields");
    const auto male = parse_count(fields[1]);
    const auto female = parse_count(fields[2]);
    if (!male || !female) throw FormatError(where + ": counts must be non-negative integers");
    if (*male + *female == 0) throw FormatError(where + ": zero total");
    if (!valid_key(fields[0])) throw FormatError(where + ": name is not a clean name");
    if (!previous.empty() && !(previous < fields[0])) {
      throw FormatError(where + ": names must be sorted and unique");
    }
    previous = fields[0];
    table.add(fields[0], SexCounts{*male, *female});
  }
  if (in.bad()) throw IoError("error reading gender table");
  if (!versioned && !table.empty()) throw FormatError("gender table: missing format_version");
  return table;
}

}  // namespace onomast::gender
