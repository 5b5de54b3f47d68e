#include "onomast/biblio_merge.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "onomast/errors.hpp"

namespace onomast::biblio {
namespace {

// RFC 4180 record reader. Quoted fields may contain commas, doubled quotes
// and line breaks.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : buf_(*in.rdbuf()) {}

  // Returns false at end of input. `well_formed` is cleared when quoting is broken.
  bool next(std::vector<std::string>& fields, bool& well_formed) {
    fields.clear();
    well_formed = true;
    int c = buf_.sgetc();
    if (c == EOF) return false;
    if (first_) {
      first_ = false;
      skip_bom();
    }
    std::string field;
    for (;;) {
      c = buf_.sbumpc();
      if (c == EOF || c == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(std::move(field));
        return true;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        continue;
      }
      if (c == '"' && field.empty()) {
        if (!quoted(field)) well_formed = false;
        continue;
      }
      field.push_back(static_cast<char>(c));
    }
  }

 private:
  void skip_bom() {
    if (buf_.sgetc() != 0xEF) return;
    buf_.sbumpc();
    if (buf_.sgetc() == 0xBB) buf_.sbumpc();
    if (buf_.sgetc() == 0xBF) buf_.sbumpc();
  }

  // Reads a quoted field body up to the closing quote. Returns false when the
  // closing quote is followed by something other than a separator.
  bool quoted(std::string& field) {
    for (;;) {
      const int c = buf_.sbumpc();
      if (c == EOF) return false;
      if (c != '"') {
        field.push_back(static_cast<char>(c));
        continue;
      }
      if (buf_.sgetc() == '"') {
        buf_.sbumpc();
        field.push_back('"');
        continue;
      }
      const int next = buf_.sgetc();
      if (next == ',' || next == '\n' || next == EOF) return true;
      if (next == '\r') return true;
      return false;
    }
  }

  std::streambuf& buf_;
  bool first_ = true;
};

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

template <typename T>
std::optional<T> parse_int(std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool consistent(std::span<const AuthorshipRecord> article) {
  const auto citations = article.front().citations;
  std::size_t singles = 0;
  std::size_t authors = 0;
  for (const auto& r : article) {
    if (r.citations != citations) return false;
    if (r.role == Role::Single) ++singles;
    if (r.role != Role::Corresponding) ++authors;
  }
  return singles == 0 || authors == 1;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Single: return "single";
    case Role::First: return "first";
    case Role::Middle: return "middle";
    case Role::Last: return "last";
    case Role::Corresponding: return "corresponding";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view text) {
  const std::string key = lower(trim(text));
  for (Role r : kAllRoles) {
    if (key == to_string(r)) return r;
  }
  return std::nullopt;
}

std::vector<AuthorshipRecord> ingest(std::istream& in, const IngestOptions& options,
                                     IngestStats& stats) {
  std::vector<AuthorshipRecord> records;
  CsvReader reader(in);
  std::vector<std::string> fields;
  bool well_formed = true;

  // Header; blank leading lines are tolerated.
  bool have_header = false;
  while (reader.next(fields, well_formed)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    have_header = true;
    break;
  }
  if (!have_header) return records;
  if (!well_formed) throw FormatError("authorship CSV: malformed header");

  const std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t col_article = npos, col_role = npos, col_name = npos, col_citations = npos,
              col_year = npos;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string name = lower(trim(fields[i]));
    if (name == "article_id") col_article = i;
    else if (name == "role") col_role = i;
    else if (name == "first_name") col_name = i;
    else if (name == "citations") col_citations = i;
    else if (name == "year") col_year = i;
  }
  for (auto [col, label] : {std::pair{col_article, "article_id"}, std::pair{col_role, "role"},
                            std::pair{col_name, "first_name"},
                            std::pair{col_citations, "citations"}}) {
    if (col == npos) {
      throw FormatError(std::string("authorship CSV: missing required column '") + label + "'");
    }
  }
  const std::size_t width = fields.size();

  while (reader.next(fields, well_formed)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
    ++stats.rows_read;
    if (!well_formed || fields.size() != width) {
      ++stats.rows_skipped_invalid;
      continue;
    }
    AuthorshipRecord r;
    r.article_id = std::string(trim(fields[col_article]));
    const auto role = parse_role(fields[col_role]);
    const auto citations = parse_int<std::uint64_t>(fields[col_citations]);
    r.raw_first_name = fields[col_name];
    bool ok = role && citations && !r.article_id.empty() && !trim(r.raw_first_name).empty();
    if (ok && col_year != npos && !trim(fields[col_year]).empty()) {
      r.year = parse_int<int>(fields[col_year]);
      ok = r.year.has_value();
    }
    if (!ok) {
      ++stats.rows_skipped_invalid;
      continue;
    }
    r.role = *role;
    r.citations = *citations;
    if (options.year_range) {
      const auto [lo, hi] = *options.year_range;
      if (!r.year || *r.year < lo || *r.year > hi) {
        ++stats.rows_filtered_year;
        continue;
      }
    }
    records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("error reading authorship CSV");
  return records;
}

std::vector<AuthorshipRecord> derive_corresponding(std::span<const AuthorshipRecord> article) {
  std::vector<AuthorshipRecord> out(article.begin(), article.end());
  const auto has = [&](Role role) {
    return std::any_of(article.begin(), article.end(),
                       [role](const AuthorshipRecord& r) { return r.role == role; });
  };
  if (has(Role::Corresponding)) return out;
  const Role source = has(Role::Single) ? Role::Single : Role::First;
  for (const auto& r : article) {
    if (r.role != source) continue;
    AuthorshipRecord dup = r;
    dup.role = Role::Corresponding;
    out.push_back(std::move(dup));
  }
  return out;
}

std::vector<AuthorshipRecord> apply_corresponding_default(std::span<const AuthorshipRecord> records,
                                                          GroupStats& stats) {
  std::unordered_map<std::string_view, std::size_t> index;
  std::vector<std::vector<AuthorshipRecord>> groups;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.article_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(r);
  }
  std::vector<AuthorshipRecord> out;
  out.reserve(records.size() + groups.size());
  for (const auto& group : groups) {
    ++stats.articles;
    if (!consistent(group)) {
      ++stats.articles_dropped_inconsistent;
      continue;
    }
    auto derived = derive_corresponding(group);
    stats.corresponding_derived += derived.size() - group.size();
    std::move(derived.begin(), derived.end(), std::back_inserter(out));
  }
  return out;
}

AttachStats& AttachStats::operator+=(const AttachStats& o) {
  matched += o.matched;
  matched_full_name += o.matched_full_name;
  matched_first_token += o.matched_first_token;
  unmatched += o.unmatched;
  emptied_by_cleaning += o.emptied_by_cleaning;
  return *this;
}

std::optional<ScoredAuthorship> attach_genderedness(const AuthorshipRecord& record,
                                                    const gender::GenderTable& table,
                                                    const names::NormalizerOptions& options,
                                                    AttachStats* stats) {
  AttachStats local;
  auto name = names::clean(record.raw_first_name, options);
  std::optional<ScoredAuthorship> result;
  if (!name) {
    ++local.emptied_by_cleaning;
  } else {
    gender::SexCounts counts;
    bool hit = false;
    if (const auto* full = table.find(name->text())) {
      counts += *full;
      hit = true;
      ++local.matched_full_name;
    }
    if (name->compound()) {
      if (const auto* head = table.find(names::first_token(*name))) {
        counts += *head;
        hit = true;
        ++local.matched_first_token;
      }
    }
    if (hit) {
      ++local.matched;
      result = ScoredAuthorship{record, *name, counts, gender::score(counts)};
    } else {
      ++local.unmatched;
    }
  }
  if (stats) *stats += local;
  return result;
}

RoleDataset build_role_dataset(std::span<const ScoredAuthorship> scored, Role role) {
  RoleDataset dataset{role, {}};
  for (const auto& s : scored) {
    if (s.record.role != role) continue;
    auto& bucket = dataset.buckets[s.genderedness];
    bucket.types.insert(s.clean_name.text());
    ++bucket.tokens;
    ++bucket.articles;
    bucket.citations += s.record.citations;
  }
  return dataset;
}

void write_merged_tsv(std::ostream& out, const RoleDataset& dataset) {
  out << "# format_version\t1\n";
  out << "# role\t" << to_string(dataset.role) << '\n';
  out << "# genderedness_num\tgenderedness_den\ttypes\ttokens\tarticles\tcitations\n";
  for (const auto& [g, bucket] : dataset.buckets) {
    out << g.numerator() << '\t' << g.denominator() << '\t' << bucket.types.size() << '\t'
        << bucket.tokens << '\t' << bucket.articles << '\t' << bucket.citations << '\n';
  }
}

}  // namespace onomast::biblio
