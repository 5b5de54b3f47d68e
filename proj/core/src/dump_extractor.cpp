#include "onomast/dump_extractor.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <istream>
#include <ostream>
#include <thread>

#include "onomast/errors.hpp"
#include "onomast/input.hpp"

namespace onomast::extract {
namespace {

std::optional<Qid> entity_of(const nt::TermView& term) {
  if (term.kind != nt::TermKind::Iri || !term.value.starts_with(iri::kEntityPrefix)) {
    return std::nullopt;
  }
  return parse_qid(term.value.substr(iri::kEntityPrefix.size()));
}

int language_rank(std::string_view language, std::string_view preferred) {
  if (language == preferred) return 0;
  if (language == "mul") return 1;
  return 2;
}

struct ChunkResult {
  EntityAccumulator entities;
  nt::ParseStats parse;
};

void scan_facts(io::ByteSource& source, EntityAccumulator& acc, nt::ParseStats& stats) {
  nt::parse_nt_stream(
      source,
      [&](const nt::TripleView& triple) {
        // Labels are only meaningful once the wanted name items are known.
        if (triple.predicate.value == iri::kRdfsLabel) return;
        if (auto fact = filter_relevant(triple)) acc.add(*fact);
      },
      stats);
}

// Pass two only parses label statements; other lines are counted so the
// pass can be checked against pass one.
void scan_labels(io::ByteSource& source, LabelAccumulator& acc, nt::ParseStats& stats,
                 std::uint64_t& accepted) {
  io::LineReader reader(source);
  nt::LineParser parser;
  nt::TripleView triple;
  std::string_view line;
  while (reader.next(line)) {
    ++stats.lines_read;
    if (line.find("rdf-schema#label>") == std::string_view::npos) continue;
    if (parser.parse(line, triple) != nt::LineKind::Statement) continue;
    if (triple.predicate.value != iri::kRdfsLabel) continue;
    if (auto fact = filter_relevant(triple)) {
      if (auto* label = std::get_if<NameLabel>(&*fact); label && acc.add(*label)) ++accepted;
    }
  }
  stats.bytes_read += reader.bytes_consumed();
}

template <typename Work>
void run_parallel(std::size_t count, Work work) {
  if (count <= 1) {
    if (count == 1) work(0);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  workers.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    workers.emplace_back([&, i] {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void append_escaped(std::string& out, std::string_view name) {
  for (char c : name) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case ';': out += "\\;"; break;
      default: out.push_back(c);
    }
  }
}

std::vector<std::string> split_names(std::string_view field, std::size_t line_no) {
  std::vector<std::string> names;
  std::string current;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const char c = field[i];
    if (c == ';') {
      names.push_back(std::move(current));
      current.clear();
    } else if (c == '\\') {
      if (++i >= field.size()) {
        throw FormatError("entities line " + std::to_string(line_no) + ": dangling escape");
      }
      switch (field[i]) {
        case '\\': current.push_back('\\'); break;
        case 't': current.push_back('\t'); break;
        case 'n': current.push_back('\n'); break;
        case 'r': current.push_back('\r'); break;
        case ';': current.push_back(';'); break;
        default:
          throw FormatError("entities line " + std::to_string(line_no) + ": bad escape");
      }
    } else {
      current.push_back(c);
    }
  }
  names.push_back(std::move(current));
  return names;
}

}  // namespace

std::string format_qid(Qid id) { return "Q" + std::to_string(id); }

std::optional<Qid> parse_qid(std::string_view text) {
  if (text.size() < 2 || text[0] != 'Q' || text[1] == '0') return std::nullopt;
  Qid value = 0;
  const char* first = text.data() + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

char sex_code(Sex sex) { return sex == Sex::Male ? 'M' : 'F'; }

std::optional<RelevantFact> filter_relevant(const nt::TripleView& triple) {
  const auto subject = entity_of(triple.subject);
  if (!subject) return std::nullopt;
  const std::string_view predicate = triple.predicate.value;

  if (predicate == iri::kRdfsLabel) {
    if (triple.object.kind != nt::TermKind::Literal) return std::nullopt;
    return NameLabel{*subject, std::string(triple.object.value),
                     std::string(triple.object.language)};
  }
  if (!predicate.starts_with(iri::kDirectPrefix)) return std::nullopt;

  const auto object = entity_of(triple.object);
  if (!object) return std::nullopt;
  if (predicate == iri::kInstanceOf) {
    if (*object == kHuman) return HumanMarker{*subject};
  } else if (predicate == iri::kGivenName) {
    return GivenNameLink{*subject, *object};
  } else if (predicate == iri::kSexOrGender) {
    if (*object == kMale) return SexStatement{*subject, Sex::Male};
    if (*object == kFemale) return SexStatement{*subject, Sex::Female};
  }
  return std::nullopt;
}

std::optional<RelevantFact> filter_relevant(const nt::Triple& triple) {
  auto view = [](const nt::Term& t) {
    return nt::TermView{t.kind, t.value, t.language, t.datatype};
  };
  return filter_relevant(nt::TripleView{view(triple.subject), view(triple.predicate),
                                        view(triple.object)});
}

void EntityAccumulator::add(const RelevantFact& fact) {
  std::visit(
      [this](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HumanMarker>) {
          entities_[f.entity].human = true;
        } else if constexpr (std::is_same_v<T, GivenNameLink>) {
          entities_[f.entity].name_items.push_back(f.name_item);
        } else if constexpr (std::is_same_v<T, SexStatement>) {
          auto& e = entities_[f.entity];
          (f.sex == Sex::Male ? e.male : e.female) = true;
        } else {
          return;  // labels belong to the second pass
        }
        ++facts_added_;
      },
      fact);
}

void EntityAccumulator::merge(EntityAccumulator&& other) {
  if (entities_.empty()) {
    entities_ = std::move(other.entities_);
  } else {
    for (auto& [id, facts] : other.entities_) {
      auto& mine = entities_[id];
      mine.human = mine.human || facts.human;
      mine.male = mine.male || facts.male;
      mine.female = mine.female || facts.female;
      mine.name_items.insert(mine.name_items.end(), facts.name_items.begin(),
                             facts.name_items.end());
    }
  }
  facts_added_ += other.facts_added_;
  other.entities_.clear();
  other.facts_added_ = 0;
}

std::unordered_set<Qid> EntityAccumulator::wanted_name_items() const {
  std::unordered_set<Qid> wanted;
  for (const auto& [id, facts] : entities_) {
    if (!facts.human) continue;
    wanted.insert(facts.name_items.begin(), facts.name_items.end());
  }
  return wanted;
}

LabelAccumulator::LabelAccumulator(const std::unordered_set<Qid>& wanted,
                                   std::string preferred_language)
    : wanted_(&wanted), preferred_(std::move(preferred_language)) {}

bool LabelAccumulator::better(const NameLabel& candidate, const Choice& current) const {
  const int a = language_rank(candidate.language, preferred_);
  const int b = language_rank(current.language, preferred_);
  if (a != b) return a < b;
  if (candidate.language != current.language) return candidate.language < current.language;
  return candidate.label < current.label;
}

bool LabelAccumulator::add(const NameLabel& label) {
  if (!wanted_->contains(label.name_item)) return false;
  auto [it, inserted] = chosen_.try_emplace(label.name_item, Choice{label.label, label.language});
  if (!inserted && better(label, it->second)) it->second = Choice{label.label, label.language};
  return true;
}

void LabelAccumulator::merge(LabelAccumulator&& other) {
  for (auto& [id, choice] : other.chosen_) {
    add(NameLabel{id, std::move(choice.label), std::move(choice.language)});
  }
  other.chosen_.clear();
}

std::vector<HumanEntityRecord> assemble_entities(const EntityAccumulator& entities,
                                                 const LabelAccumulator& labels,
                                                 ExtractionStats& stats) {
  std::vector<HumanEntityRecord> records;
  std::unordered_set<Qid> name_items;
  for (const auto& [id, facts] : entities.entities()) {
    if (!facts.human) continue;
    ++stats.human_entities;
    name_items.insert(facts.name_items.begin(), facts.name_items.end());
    if (facts.male && facts.female) {
      ++stats.entities_dropped_conflicting_sex;
      continue;
    }
    if (!facts.male && !facts.female) {
      ++stats.entities_dropped_no_sex;
      continue;
    }
    HumanEntityRecord record{id, {}, facts.male ? Sex::Male : Sex::Female};
    for (Qid item : facts.name_items) {
      if (auto it = labels.chosen().find(item); it != labels.chosen().end()) {
        record.given_names.push_back(it->second.label);
      }
    }
    std::sort(record.given_names.begin(), record.given_names.end());
    record.given_names.erase(std::unique(record.given_names.begin(), record.given_names.end()),
                             record.given_names.end());
    if (record.given_names.empty()) {
      ++stats.entities_dropped_no_label;
      continue;
    }
    records.push_back(std::move(record));
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.entity < b.entity; });
  stats.entities_emitted += records.size();
  stats.name_items += name_items.size();
  for (Qid item : name_items) {
    auto it = labels.chosen().find(item);
    if (it == labels.chosen().end()) {
      ++stats.name_items_unlabelled;
    } else {
      ++stats.chosen_label_languages[it->second.language];
    }
  }
  return records;
}

std::vector<HumanEntityRecord> assemble_entities(std::span<const RelevantFact> facts,
                                                 const ExtractOptions& options,
                                                 ExtractionStats& stats) {
  EntityAccumulator entities;
  for (const auto& fact : facts) entities.add(fact);
  const auto wanted = entities.wanted_name_items();
  LabelAccumulator labels(wanted, options.preferred_language);
  std::uint64_t accepted = 0;
  for (const auto& fact : facts) {
    if (const auto* label = std::get_if<NameLabel>(&fact); label && labels.add(*label)) {
      ++accepted;
    }
  }
  stats.triples_matched += entities.facts_added() + accepted;
  return assemble_entities(entities, labels, stats);
}

std::vector<HumanEntityRecord> extract_entities(const std::filesystem::path& dump,
                                                const ExtractOptions& options,
                                                ExtractionStats& stats) {
  const bool gzip = io::is_gzip(dump);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  if (!gzip) ranges = io::split_at_lines(dump, std::max(1u, options.threads));

  auto open = [&](std::size_t i) {
    return gzip ? io::open_source(dump) : io::open_range(dump, ranges[i].first, ranges[i].second);
  };
  const std::size_t parts = gzip ? 1 : ranges.size();

  // Pass one.
  std::vector<ChunkResult> chunks(parts);
  run_parallel(parts, [&](std::size_t i) {
    auto source = open(i);
    scan_facts(*source, chunks[i].entities, chunks[i].parse);
  });
  EntityAccumulator entities;
  nt::ParseStats first_pass;
  for (auto& chunk : chunks) {
    entities.merge(std::move(chunk.entities));
    first_pass += chunk.parse;
  }
  chunks.clear();

  // Pass two.
  const auto wanted = entities.wanted_name_items();
  std::vector<LabelAccumulator> label_parts;
  label_parts.reserve(parts);
  for (std::size_t i = 0; i < parts; ++i) label_parts.emplace_back(wanted, options.preferred_language);
  std::vector<nt::ParseStats> second_stats(parts);
  std::vector<std::uint64_t> accepted(parts, 0);
  run_parallel(parts, [&](std::size_t i) {
    auto source = open(i);
    scan_labels(*source, label_parts[i], second_stats[i], accepted[i]);
  });
  LabelAccumulator labels(wanted, options.preferred_language);
  nt::ParseStats second_pass;
  std::uint64_t labels_accepted = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    labels.merge(std::move(label_parts[i]));
    second_pass += second_stats[i];
    labels_accepted += accepted[i];
  }
  if (second_pass.lines_read != first_pass.lines_read ||
      second_pass.bytes_read != first_pass.bytes_read) {
    throw InconsistencyError(dump.string() + ": second pass read " +
                             std::to_string(second_pass.lines_read) + " lines / " +
                             std::to_string(second_pass.bytes_read) + " bytes, first pass " +
                             std::to_string(first_pass.lines_read) + " / " +
                             std::to_string(first_pass.bytes_read));
  }

  stats.lines_read += first_pass.lines_read;
  stats.lines_skipped_malformed += first_pass.lines_skipped_malformed;
  stats.triples_matched += entities.facts_added() + labels_accepted;
  return assemble_entities(entities, labels, stats);
}

void write_entities_tsv(std::ostream& out, const EntityFileHeader& header,
                        std::span<const HumanEntityRecord> records) {
  out << "# format_version\t1\n";
  out << "# dump\t" << header.dump_id << '\n';
  out << "# dump_date\t" << header.dump_date << '\n';
  std::string line;
  for (const auto& r : records) {
    line.clear();
    line += format_qid(r.entity);
    line += '\t';
    line += sex_code(r.sex);
    line += '\t';
    for (std::size_t i = 0; i < r.given_names.size(); ++i) {
      if (i > 0) line += ';';
      append_escaped(line, r.given_names[i]);
    }
    line += '\n';
    out << line;
  }
}

EntityFile read_entities_tsv(std::istream& in) {
  EntityFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view meta(line);
      meta.remove_prefix(1);
      while (!meta.empty() && meta.front() == ' ') meta.remove_prefix(1);
      const auto tab = meta.find('\t');
      if (tab == std::string_view::npos) continue;
      const auto key = meta.substr(0, tab);
      const auto value = meta.substr(tab + 1);
      if (key == "format_version" && value != "1") {
        throw FormatError("entities file: unsupported format_version " + std::string(value));
      }
      if (key == "dump") file.header.dump_id = value;
      if (key == "dump_date") file.header.dump_date = value;
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw FormatError("entities line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto qid = parse_qid(std::string_view(line).substr(0, t1));
    const std::string_view sex = std::string_view(line).substr(t1 + 1, t2 - t1 - 1);
    if (!qid || (sex != "M" && sex != "F")) {
      throw FormatError("entities line " + std::to_string(line_no) + ": bad qid or sex");
    }
    HumanEntityRecord record{*qid, split_names(std::string_view(line).substr(t2 + 1), line_no),
                             sex == "M" ? Sex::Male : Sex::Female};
    file.records.push_back(std::move(record));
  }
  if (in.bad()) throw IoError("error reading entities file");
  return file;
}

void write_stats(std::ostream& out, const ExtractionStats& s) {
  out << "lines_read\t" << s.lines_read << '\n'
      << "lines_skipped_malformed\t" << s.lines_skipped_malformed << '\n'
      << "triples_matched\t" << s.triples_matched << '\n'
      << "human_entities\t" << s.human_entities << '\n'
      << "entities_emitted\t" << s.entities_emitted << '\n'
      << "entities_dropped_no_label\t" << s.entities_dropped_no_label << '\n'
      << "entities_dropped_conflicting_sex\t" << s.entities_dropped_conflicting_sex << '\n'
      << "entities_dropped_no_sex\t" << s.entities_dropped_no_sex << '\n'
      << "name_items\t" << s.name_items << '\n'
      << "name_items_unlabelled\t" << s.name_items_unlabelled << '\n';
  for (const auto& [lang, count] : s.chosen_label_languages) {
    out << "label_language\t" << (lang.empty() ? "-" : lang) << '\t' << count << '\n';
  }
}

}  // namespace onomast::extract
