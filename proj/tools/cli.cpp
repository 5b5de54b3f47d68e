#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "digest.hpp"
#include "onomast/analytics.hpp"
#include "onomast/biblio_merge.hpp"
#include "onomast/dump_extractor.hpp"
#include "onomast/errors.hpp"
#include "onomast/genderedness_table.hpp"
#include "onomast/input.hpp"
#include "onomast/name_normalizer.hpp"

namespace onomast::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string version_string() {
  std::ostringstream s;
  s << "onomast " << kToolVersion << " (entities format 1, table format 1, merged format 1, "
    << "analysis format " << analytics::kFormatVersion << ")";
  return s.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes to a sibling temporary file and renames it into place on commit().
class AtomicFile {
 public:
  explicit AtomicFile(fs::path target) : target_(std::move(target)) {
    if (target_.has_parent_path()) fs::create_directories(target_.parent_path());
    tmp_ = target_;
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot write " + tmp_.string());
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw IoError("error writing " + tmp_.string());
    out_.close();
    fs::rename(tmp_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::ifstream open_input(const fs::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + std::string(what) + " " + path.string());
  return in;
}

void require(const fs::path& path, std::string_view flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
}

names::NormalizerOptions normalizer_options(const PipelineConfig& c) {
  return names::NormalizerOptions{static_cast<std::size_t>(c.initials_max_len)};
}

json config_json(const PipelineConfig& c) {
  json j;
  j["dump_path"] = c.dump_path;
  j["dump_date"] = c.dump_date;
  j["labels_language"] = c.labels_language;
  j["initials_max_len"] = c.initials_max_len;
  j["alpha"] = c.alpha;
  j["year_range"] = c.year_range;
  j["role"] = c.role;
  j["transform"] = c.transform;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir.string();
  return j;
}

json input_json(const fs::path& path) {
  return json{{"path", path.string()},
              {"bytes", fs::file_size(path)},
              {"sha256", sha256_file(path)}};
}

json to_json(const extract::ExtractionStats& s) {
  json j{{"lines_read", s.lines_read},
         {"lines_skipped_malformed", s.lines_skipped_malformed},
         {"triples_matched", s.triples_matched},
         {"human_entities", s.human_entities},
         {"entities_emitted", s.entities_emitted},
         {"entities_dropped_no_label", s.entities_dropped_no_label},
         {"entities_dropped_conflicting_sex", s.entities_dropped_conflicting_sex},
         {"entities_dropped_no_sex", s.entities_dropped_no_sex},
         {"name_items", s.name_items},
         {"name_items_unlabelled", s.name_items_unlabelled}};
  j["chosen_label_languages"] = json::object();
  for (const auto& [lang, n] : s.chosen_label_languages) j["chosen_label_languages"][lang] = n;
  return j;
}

struct Manifest {
  std::string command;
  std::string started_at = utc_now();
  json config;
  json inputs = json::array();
  json outputs = json::array();
  json stats = json::object();

  void write(const fs::path& path) const {
    json j;
    j["tool"] = "onomast";
    j["version"] = std::string(kToolVersion);
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["stats"] = stats;
    j["started_at"] = started_at;
    j["finished_at"] = utc_now();
    AtomicFile file(path);
    file.stream() << j.dump(2) << '\n';
    file.commit();
  }
};

// ---- stages ---------------------------------------------------------------

void stage_extract(const PipelineConfig& c, const fs::path& out_path, std::istream& in,
                   std::ostream& out, std::ostream& err, Manifest& manifest) {
  if (c.dump_path.empty()) throw UsageError("--dump is required");
  std::optional<io::SpooledStdin> spooled;
  fs::path dump = c.dump_path;
  std::string dump_id = fs::path(c.dump_path).filename().string();
  if (c.dump_path == "-") {
    spooled.emplace(in);
    dump = spooled->path();
    dump_id = "stdin";
  }
  manifest.inputs.push_back(input_json(dump));
  if (c.dump_path == "-") manifest.inputs.back()["path"] = "-";

  extract::ExtractOptions options{c.labels_language, std::max(1u, c.threads)};
  extract::ExtractionStats stats;
  const auto records = extract::extract_entities(dump, options, stats);
  const extract::EntityFileHeader header{dump_id, c.dump_date};

  if (out_path.empty()) {
    extract::write_entities_tsv(out, header, records);
  } else {
    AtomicFile file(out_path);
    extract::write_entities_tsv(file.stream(), header, records);
    file.commit();
    manifest.outputs.push_back(out_path.string());
  }
  if (!c.stats_out.empty()) {
    AtomicFile file(c.stats_out);
    extract::write_stats(file.stream(), stats);
    file.commit();
    manifest.outputs.push_back(c.stats_out.string());
  }
  err << "extract: " << stats.lines_read << " lines, " << stats.lines_skipped_malformed
      << " malformed, " << stats.entities_emitted << " entities emitted\n";
  extract::write_stats(err, stats);
  manifest.stats["extract"] = to_json(stats);
}

void stage_build_table(const PipelineConfig& c, const fs::path& entities_path,
                       const fs::path& out_path, std::ostream& err, Manifest& manifest) {
  require(entities_path, "--entities");
  require(out_path, "--out");
  auto in = open_input(entities_path, "entities file");
  const auto entities = extract::read_entities_tsv(in);
  gender::AccumulateStats stats;
  const auto table =
      gender::accumulate(entities.records, normalizer_options(c), entities.header, &stats);
  AtomicFile file(out_path);
  gender::write_table_tsv(file.stream(), table);
  file.commit();

  manifest.inputs.push_back(input_json(entities_path));
  manifest.outputs.push_back(out_path.string());
  manifest.stats["build_table"] = {{"entities_seen", stats.entities_seen},
                                   {"entities_contributing", stats.entities_contributing},
                                   {"names_dropped_empty", stats.names_dropped_empty},
                                   {"names", table.size()}};
  err << "build-table: " << stats.entities_contributing << " entities, " << table.size()
      << " names\n";
}

std::vector<biblio::Role> selected_roles(std::string_view role) {
  if (role == "all") return {biblio::kAllRoles.begin(), biblio::kAllRoles.end()};
  const auto parsed = biblio::parse_role(role);
  if (!parsed) throw UsageError("unknown role '" + std::string(role) + "'");
  return {*parsed};
}

// With a single role `out` is the TSV path; with "all" it is a directory
// receiving one <role>.tsv per role.
void stage_merge(const PipelineConfig& c, const fs::path& table_path,
                 const fs::path& authors_path, const fs::path& out, std::ostream& err,
                 Manifest& manifest) {
  require(table_path, "--table");
  require(authors_path, "--authors");
  require(out, "--out");
  const auto roles = selected_roles(c.role);

  auto table_in = open_input(table_path, "gender table");
  const auto table = gender::read_table_tsv(table_in);
  auto authors_in = open_input(authors_path, "authorship file");
  biblio::IngestOptions ingest_options;
  if (!c.year_range.empty()) ingest_options.year_range = parse_year_range(c.year_range);
  biblio::IngestStats ingest_stats;
  const auto records = biblio::ingest(authors_in, ingest_options, ingest_stats);
  biblio::GroupStats group_stats;
  const auto expanded = biblio::apply_corresponding_default(records, group_stats);

  const auto options = normalizer_options(c);
  biblio::AttachStats attach_stats;
  std::vector<biblio::ScoredAuthorship> scored;
  scored.reserve(expanded.size());
  for (const auto& r : expanded) {
    if (auto s = biblio::attach_genderedness(r, table, options, &attach_stats)) {
      scored.push_back(std::move(*s));
    }
  }

  json role_stats = json::object();
  for (const auto role : roles) {
    const auto dataset = biblio::build_role_dataset(scored, role);
    const fs::path target =
        c.role == "all" ? out / (std::string(biblio::to_string(role)) + ".tsv") : out;
    AtomicFile file(target);
    biblio::write_merged_tsv(file.stream(), dataset);
    file.commit();
    manifest.outputs.push_back(target.string());
    std::uint64_t tokens = 0;
    for (const auto& [g, b] : dataset.buckets) tokens += b.tokens;
    role_stats[std::string(biblio::to_string(role))] = {{"points", dataset.buckets.size()},
                                                        {"tokens", tokens}};
  }

  manifest.inputs.push_back(input_json(table_path));
  manifest.inputs.push_back(input_json(authors_path));
  manifest.stats["merge"] = {
      {"rows_read", ingest_stats.rows_read},
      {"rows_skipped_invalid", ingest_stats.rows_skipped_invalid},
      {"rows_filtered_year", ingest_stats.rows_filtered_year},
      {"articles", group_stats.articles},
      {"articles_dropped_inconsistent", group_stats.articles_dropped_inconsistent},
      {"corresponding_derived", group_stats.corresponding_derived},
      {"matched", attach_stats.matched},
      {"matched_full_name", attach_stats.matched_full_name},
      {"matched_first_token", attach_stats.matched_first_token},
      {"unmatched", attach_stats.unmatched},
      {"emptied_by_cleaning", attach_stats.emptied_by_cleaning},
      {"roles", role_stats}};
  err << "merge: " << ingest_stats.rows_read << " rows, " << ingest_stats.rows_skipped_invalid
      << " invalid, " << attach_stats.matched << " matched, " << attach_stats.unmatched
      << " unmatched\n";
}

void stage_analyze(const PipelineConfig& c, const std::vector<fs::path>& merged,
                   const fs::path& table_path, const fs::path& out_dir, std::ostream& err,
                   Manifest& manifest) {
  if (merged.empty()) throw UsageError("--merged is required");
  require(out_dir, "--out-dir");
  const auto alpha = *analytics::parse_decimal(c.alpha);
  const auto mode = *analytics::parse_transform(c.transform);

  std::vector<std::pair<std::string, std::vector<analytics::SpectrumPoint>>> roles;
  for (const auto& path : merged) {
    auto in = open_input(path, "merged TSV");
    auto file = analytics::read_merged_tsv(in);
    std::string label = file.role.empty() ? path.stem().string() : file.role;
    manifest.inputs.push_back(input_json(path));
    roles.emplace_back(std::move(label), std::move(file.points));
  }
  std::optional<gender::GenderTable> table;
  if (!table_path.empty()) {
    auto in = open_input(table_path, "gender table");
    table = gender::read_table_tsv(in);
    manifest.inputs.push_back(input_json(table_path));
  }

  const auto summary = analytics::report(roles, alpha, table ? &*table : nullptr);

  for (const auto& [label, points] : roles) {
    const fs::path target = out_dir / (label + ".tsv");
    AtomicFile file(target);
    analytics::write_role_tsv(file.stream(), label, points, mode);
    file.commit();
    manifest.outputs.push_back(target.string());
    if (mode == analytics::TransformMode::Paper) {
      const fs::path plot = out_dir / (label + ".plot.tsv");
      AtomicFile pf(plot);
      analytics::write_plot_tsv(pf.stream(), label, points);
      pf.commit();
      manifest.outputs.push_back(plot.string());
    }
  }
  const fs::path summary_path = out_dir / "summary.json";
  AtomicFile sf(summary_path);
  sf.stream() << analytics::report_to_json(summary);
  sf.commit();
  manifest.outputs.push_back(summary_path.string());
  manifest.stats["analyze"] = {{"roles", roles.size()}};
  err << "analyze: " << roles.size() << " role datasets written to " << out_dir.string() << '\n';
}

// ---- config file ------------------------------------------------------------

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::string> find_flag_value(const std::vector<std::string>& args,
                                           std::string_view flag) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with(std::string(flag) + "=")) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

// Appends `--key value` for every `key=value` line of the config file whose
// key names an option of the chosen subcommand and is not already given.
std::vector<std::string> apply_config_file(const CLI::App& app, std::vector<std::string> args) {
  const auto path = find_flag_value(args, "--config");
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw IoError("cannot open config file " + *path);

  const CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (a.starts_with("-")) continue;
    sub = app.get_subcommand_no_throw(a);
    if (sub) break;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#' || content[0] == ';' || content[0] == '[') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt || has_flag(args, flag)) continue;
    args.push_back(flag);
    std::istringstream values(value);
    for (std::string v; values >> v;) args.push_back(v);
  }
  return args;
}

fs::path manifest_path_for(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

}  // namespace

std::pair<int, int> parse_year_range(std::string_view text) {
  const auto dash = text.find('-', 1);
  if (dash == std::string_view::npos) {
    throw ContractViolation("year range must look like FROM-TO");
  }
  int lo = 0;
  int hi = 0;
  try {
    std::size_t used = 0;
    const std::string a(text.substr(0, dash));
    const std::string b(text.substr(dash + 1));
    lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::logic_error&) {
    throw ContractViolation("year range must look like FROM-TO");
  }
  if (lo > hi) throw ContractViolation("year range is reversed");
  return {lo, hi};
}

void validate(const PipelineConfig& c) {
  const auto alpha = analytics::parse_decimal(c.alpha);
  if (!alpha || !(*alpha > 0 && *alpha < analytics::Rational(1, 2))) {
    throw ContractViolation("alpha must be a decimal strictly between 0 and 0.5, got '" +
                            c.alpha + "'");
  }
  if (c.initials_max_len < 0) throw ContractViolation("initials-max-len must be >= 0");
  if (!c.year_range.empty()) parse_year_range(c.year_range);
  if (!analytics::parse_transform(c.transform)) {
    throw ContractViolation("transform must be 'none' or 'paper'");
  }
}

int run(const std::vector<std::string>& raw_args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  PipelineConfig c;
  std::string config_path;

  CLI::App app{"First-name genderedness pipeline", "onomast"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", config_path, "key=value file; flags take precedence");
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  auto add_normalizer = [&](CLI::App* sub) {
    sub->add_option("--initials-max-len", c.initials_max_len,
                    "Longest all-uppercase token stripped as initials (0 = no cap)");
  };

  auto* extract_cmd = app.add_subcommand("extract", "Extract human entities from an N-Triples dump");
  extract_cmd->add_option("--dump", c.dump_path, "Dump path (plain or gzip), '-' for stdin");
  extract_cmd->add_option("--labels-lang", c.labels_language, "Preferred label language");
  extract_cmd->add_option("--dump-date", c.dump_date, "Dump date recorded as provenance");
  extract_cmd->add_option("--stats-out", c.stats_out, "Write extraction statistics here");
  extract_cmd->add_option("--out", c.out_path, "Entity TSV (default: standard output)");

  auto* table_cmd = app.add_subcommand("build-table", "Compile the name gender table");
  table_cmd->add_option("--entities", c.entities_path, "Entity TSV from extract");
  table_cmd->add_option("--out", c.out_path, "Gender table TSV");
  add_normalizer(table_cmd);

  auto* normalize_cmd = app.add_subcommand("normalize", "Clean names read one per line");
  add_normalizer(normalize_cmd);

  auto* merge_cmd = app.add_subcommand("merge", "Attach genderedness to authorship records");
  merge_cmd->add_option("--table", c.table_path, "Gender table TSV");
  merge_cmd->add_option("--authors", c.authors_path, "Authorship CSV");
  merge_cmd->add_option("--role", c.role, "single|first|middle|last|corresponding|all");
  merge_cmd->add_option("--out", c.out_path, "Output TSV (directory when --role all)");
  merge_cmd->add_option("--year-range", c.year_range, "Keep publication years FROM-TO");
  add_normalizer(merge_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Cumulative statistics per role");
  analyze_cmd->add_option("--merged", c.merged, "Merged role TSVs")->expected(1, -1);
  analyze_cmd->add_option("--alpha", c.alpha, "Tail width for the concentration share");
  analyze_cmd->add_option("--out-dir", c.out_dir, "Output directory");
  analyze_cmd->add_option("--transform", c.transform, "none|paper");
  analyze_cmd->add_option("--table", c.table_path, "Gender table for the name-level summary");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage");
  pipeline_cmd->add_option("--dump", c.dump_path, "Dump path (plain or gzip), '-' for stdin");
  pipeline_cmd->add_option("--authors", c.authors_path, "Authorship CSV");
  pipeline_cmd->add_option("--out-dir", c.out_dir, "Output directory");
  pipeline_cmd->add_option("--labels-lang", c.labels_language, "Preferred label language");
  pipeline_cmd->add_option("--dump-date", c.dump_date, "Dump date recorded as provenance");
  pipeline_cmd->add_option("--alpha", c.alpha, "Tail width for the concentration share");
  pipeline_cmd->add_option("--transform", c.transform, "none|paper");
  pipeline_cmd->add_option("--year-range", c.year_range, "Keep publication years FROM-TO");
  add_normalizer(pipeline_cmd);

  try {
    auto args = apply_config_file(app, raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "onomast: " << e.what() << '\n' << app.help() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "onomast: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "onomast: " << e.what() << '\n';
    return kExitInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    validate(c);
    Manifest manifest;
    manifest.command = command;
    manifest.config = config_json(c);

    if (command == "normalize") {
      const auto options = normalizer_options(c);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto name = names::clean(line, options)) out << name->text();
        out << '\n';
      }
      out.flush();
      return kExitOk;
    }
    if (command == "extract") {
      stage_extract(c, c.out_path, in, out, err, manifest);
      if (!c.out_path.empty()) manifest.write(manifest_path_for(c.out_path));
    } else if (command == "build-table") {
      stage_build_table(c, c.entities_path, c.out_path, err, manifest);
      manifest.write(manifest_path_for(c.out_path));
    } else if (command == "merge") {
      stage_merge(c, c.table_path, c.authors_path, c.out_path, err, manifest);
      manifest.write(c.role == "all" ? c.out_path / "manifest.json"
                                     : manifest_path_for(c.out_path));
    } else if (command == "analyze") {
      stage_analyze(c, c.merged, c.table_path, c.out_dir, err, manifest);
      manifest.write(c.out_dir / "manifest.json");
    } else if (command == "pipeline") {
      require(c.out_dir, "--out-dir");
      if (c.dump_path.empty()) throw UsageError("--dump is required");
      require(c.authors_path, "--authors");
      PipelineConfig stage = c;
      stage.role = "all";
      stage.stats_out = c.out_dir / "entities.stats.tsv";
      const fs::path entities = c.out_dir / "entities.tsv";
      const fs::path table = c.out_dir / "gender_table.tsv";
      const fs::path merged_dir = c.out_dir / "merged";
      stage_extract(stage, entities, in, out, err, manifest);
      stage_build_table(stage, entities, table, err, manifest);
      stage_merge(stage, table, c.authors_path, merged_dir, err, manifest);
      std::vector<fs::path> merged;
      for (const auto role : biblio::kAllRoles) {
        merged.push_back(merged_dir / (std::string(biblio::to_string(role)) + ".tsv"));
      }
      stage_analyze(stage, merged, table, c.out_dir / "analysis", err, manifest);
      manifest.write(c.out_dir / "manifest.json");
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "onomast " << command << ": " << e.what() << '\n' << sub->help() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "onomast " << command << ": contract violation: " << e.what() << '\n';
    return kExitContractViolation;
  } catch (const std::exception& e) {
    err << "onomast " << command << ": " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace onomast::cli
