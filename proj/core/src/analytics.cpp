#include "onomast/analytics.hpp"

#include <numeric>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "onomast/errors.hpp"

namespace onomast::analytics {
namespace {

using boost::multiprecision::cpp_int;

void require_sorted(std::span<const SpectrumPoint> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].g < points[i].g)) {
      throw ContractViolation("spectrum points must be strictly increasing in genderedness");
    }
  }
}

std::uint64_t total_of(std::span<const SpectrumPoint> points, Measure measure) {
  std::uint64_t total = 0;
  for (const auto& p : points) total += value_of(p, measure);
  return total;
}

std::string exact(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string exact(const Genderedness& g) {
  return std::to_string(g.numerator()) + "/" + std::to_string(g.denominator());
}

// Emits a double with twelve significant digits as a JSON number.
nlohmann::json number(double value) { return std::strtod(format_double(value).c_str(), nullptr); }

nlohmann::json share_json(const Rational& r) {
  return nlohmann::json{{"value", number(to_double(r))}, {"exact", exact(r)}};
}

nlohmann::json role_json(const RoleReport& r) {
  nlohmann::json j;
  j["label"] = r.label;
  j["points"] = r.points;
  j["totals"] = {{"types", r.total_types},
                 {"tokens", r.total_tokens},
                 {"articles", r.total_articles},
                 {"citations", r.total_citations}};
  j["top_share"] = {{"types", share_json(r.top_type_share)},
                    {"tokens", share_json(r.top_token_share)},
                    {"articles", share_json(r.top_article_share)},
                    {"citations", share_json(r.top_citation_share)}};
  j["type_share_g_at_least_0.9999"] = share_json(r.type_share_masculine);
  auto extreme = [](const std::optional<std::pair<Genderedness, Rational>>& e) -> nlohmann::json {
    if (!e) return nullptr;
    return {{"g", number(e->first.to_double())},
            {"g_exact", exact(e->first)},
            {"value", number(to_double(e->second))},
            {"exact", exact(e->second)}};
  };
  j["difference"] = {{"min", extreme(r.difference_min)}, {"max", extreme(r.difference_max)}};
  return j;
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

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

Rational to_rational(const Genderedness& g) {
  return Rational(cpp_int(g.numerator()), cpp_int(g.denominator()));
}

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  cpp_int num = 0;
  cpp_int den = 1;
  bool seen_digit = false;
  bool seen_dot = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
      seen_digit = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Rational(num, den);
}

std::string_view to_string(Measure measure) {
  switch (measure) {
    case Measure::Types: return "types";
    case Measure::Tokens: return "tokens";
    case Measure::Articles: return "articles";
    case Measure::Citations: return "citations";
  }
  return "?";
}

std::uint64_t value_of(const SpectrumPoint& p, Measure measure) {
  switch (measure) {
    case Measure::Types: return p.types;
    case Measure::Tokens: return p.tokens;
    case Measure::Articles: return p.articles;
    case Measure::Citations: return p.citations;
  }
  return 0;
}

std::vector<SpectrumPoint> spectrum(const biblio::RoleDataset& dataset) {
  std::vector<SpectrumPoint> points;
  points.reserve(dataset.buckets.size());
  for (const auto& [g, b] : dataset.buckets) {
    points.push_back(SpectrumPoint{g, b.types.size(), b.tokens, b.articles, b.citations});
  }
  return points;
}

std::vector<SpectrumPoint> spectrum(const gender::GenderTable& table) {
  std::map<Genderedness, SpectrumPoint> by_g;
  for (const auto& [name, counts] : table.entries()) {
    const auto g = gender::score(counts);
    auto& p = by_g[g];
    p.g = g;
    ++p.types;
    p.tokens += counts.total();
  }
  std::vector<SpectrumPoint> points;
  points.reserve(by_g.size());
  for (auto& [g, p] : by_g) points.push_back(p);
  return points;
}

CumulativeSeries cumulative_share(std::span<const SpectrumPoint> points, Measure measure) {
  require_sorted(points);
  const std::uint64_t total = total_of(points, measure);
  if (total == 0) {
    throw ContractViolation("cumulative_share: total " + std::string(to_string(measure)) +
                            " is zero");
  }
  CumulativeSeries series{measure, {}};
  series.points.reserve(points.size());
  std::uint64_t running = 0;
  for (const auto& p : points) {
    running += value_of(p, measure);
    series.points.emplace_back(p.g, Rational(cpp_int(running), cpp_int(total)));
  }
  return series;
}

DifferenceSeries cumulative_difference(std::span<const SpectrumPoint> points) {
  require_sorted(points);
  const std::uint64_t articles = total_of(points, Measure::Articles);
  const std::uint64_t citations = total_of(points, Measure::Citations);
  if (articles == 0 || citations == 0) {
    throw ContractViolation("cumulative_difference: article and citation totals must be positive");
  }
  DifferenceSeries series;
  series.points.reserve(points.size());
  std::uint64_t cum_articles = 0;
  std::uint64_t cum_citations = 0;
  for (const auto& p : points) {
    cum_articles += p.articles;
    cum_citations += p.citations;
    series.points.emplace_back(p.g, Rational(cpp_int(cum_citations), cpp_int(citations)) -
                                        Rational(cpp_int(cum_articles), cpp_int(articles)));
  }
  return series;
}

DifferenceSeries cumulative_difference(const biblio::RoleDataset& dataset) {
  return cumulative_difference(spectrum(dataset));
}

Rational top_share(std::span<const SpectrumPoint> points, Measure measure, const Rational& alpha) {
  if (!(alpha > 0 && alpha < Rational(1, 2))) {
    throw ContractViolation("top_share: alpha must lie strictly between 0 and 1/2");
  }
  const std::uint64_t total = total_of(points, measure);
  if (total == 0) throw ContractViolation("top_share: total is zero");
  const Rational upper = 1 - alpha;
  std::uint64_t inside = 0;
  for (const auto& p : points) {
    const Rational g = to_rational(p.g);
    if (g < alpha || g > upper) inside += value_of(p, measure);
  }
  return Rational(cpp_int(inside), cpp_int(total));
}

Rational share_at_least(std::span<const SpectrumPoint> points, Measure measure,
                        const Rational& threshold) {
  const std::uint64_t total = total_of(points, measure);
  if (total == 0) throw ContractViolation("share_at_least: total is zero");
  std::uint64_t above = 0;
  for (const auto& p : points) {
    if (to_rational(p.g) >= threshold) above += value_of(p, measure);
  }
  return Rational(cpp_int(above), cpp_int(total));
}

double transform_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("transform: x must lie in [0, 1]");
  return std::asin(std::sqrt(x)) / (std::numbers::pi / 2);
}

double transform_y(double y) {
  if (!(y >= 0.0) || std::isinf(y)) throw ContractViolation("transform: y must be finite and >= 0");
  return std::sqrt(y);
}

PlotPoint transform_axes(PlotPoint p) { return PlotPoint{transform_x(p.x), transform_y(p.y)}; }

RoleReport report_role(std::string label, std::span<const SpectrumPoint> points,
                       const Rational& alpha) {
  RoleReport r;
  r.label = std::move(label);
  r.points = points.size();
  r.total_types = total_of(points, Measure::Types);
  r.total_tokens = total_of(points, Measure::Tokens);
  r.total_articles = total_of(points, Measure::Articles);
  r.total_citations = total_of(points, Measure::Citations);
  if (points.empty()) return r;
  r.top_type_share = top_share(points, Measure::Types, alpha);
  r.top_token_share = top_share(points, Measure::Tokens, alpha);
  if (r.total_articles > 0) r.top_article_share = top_share(points, Measure::Articles, alpha);
  if (r.total_citations > 0) r.top_citation_share = top_share(points, Measure::Citations, alpha);
  r.type_share_masculine = share_at_least(points, Measure::Types, Rational(9999, 10000));
  if (r.total_articles > 0 && r.total_citations > 0) {
    const auto d = cumulative_difference(points);
    auto lo = d.points.front();
    auto hi = d.points.front();
    for (const auto& e : d.points) {
      if (e.second < lo.second) lo = e;
      if (e.second > hi.second) hi = e;
    }
    r.difference_min = lo;
    r.difference_max = hi;
  }
  return r;
}

Report report(const std::vector<std::pair<std::string, std::vector<SpectrumPoint>>>& roles,
              const Rational& alpha, const gender::GenderTable* table) {
  const bool any = std::any_of(roles.begin(), roles.end(),
                               [](const auto& r) { return !r.second.empty(); });
  if (!any) throw ContractViolation("report: every role dataset is empty");
  Report out;
  out.alpha = alpha;
  for (const auto& [label, points] : roles) out.roles.push_back(report_role(label, points, alpha));
  if (table != nullptr && !table->empty()) {
    TableReport t;
    const auto points = spectrum(*table);
    t.names = report_role("wikidata", points, alpha);
    for (const auto& p : table->provenance()) t.entities += p.entity_count;
    out.table = std::move(t);
  }
  return out;
}

std::string report_to_json(const Report& report) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["alpha"] = share_json(report.alpha);
  j["roles"] = nlohmann::json::array();
  for (const auto& r : report.roles) j["roles"].push_back(role_json(r));
  if (report.table) {
    auto t = role_json(report.table->names);
    t["token_counting"] = "entity_name_pairs";
    t["entities"] = report.table->entities;
    j["wikidata"] = std::move(t);
  }
  return j.dump(2) + "\n";
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double to_double(const Rational& value) {
  const cpp_int& num = numerator(value);
  const cpp_int& den = denominator(value);
  const cpp_int limit = std::numeric_limits<std::uint64_t>::max();
  if (abs(num) <= limit && den <= limit) {
    const auto n = static_cast<long double>(abs(num).convert_to<std::uint64_t>());
    const auto d = static_cast<long double>(den.convert_to<std::uint64_t>());
    const double q = static_cast<double>(n / d);
    return num < 0 ? -q : q;
  }
  return value.convert_to<double>();
}

std::optional<TransformMode> parse_transform(std::string_view text) {
  if (text == "none") return TransformMode::None;
  if (text == "paper") return TransformMode::Paper;
  return std::nullopt;
}

void write_role_tsv(std::ostream& out, std::string_view label,
                    std::span<const SpectrumPoint> points, TransformMode mode) {
  out << "# format_version\t" << kFormatVersion << '\n';
  out << "# role\t" << label << '\n';
  out << "# transform\t" << (mode == TransformMode::Paper ? "paper" : "none") << '\n';
  out << "g\tg_transformed\ttypes\ttokens\tcitations\tcum_type_share\tcum_token_share\t"
         "cum_citation_share\tD\n";
  if (points.empty()) return;

  const auto types = cumulative_share(points, Measure::Types);
  const auto tokens = cumulative_share(points, Measure::Tokens);
  const bool has_citations = total_of(points, Measure::Citations) > 0;
  const bool has_articles = total_of(points, Measure::Articles) > 0;
  std::optional<CumulativeSeries> citations;
  std::optional<DifferenceSeries> difference;
  if (has_citations) citations = cumulative_share(points, Measure::Citations);
  if (has_citations && has_articles) difference = cumulative_difference(points);

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const double g = p.g.to_double();
    const double gt = mode == TransformMode::Paper ? transform_x(g) : g;
    out << format_double(g) << '\t' << format_double(gt) << '\t' << p.types << '\t' << p.tokens
        << '\t' << p.citations << '\t' << format_double(to_double(types.points[i].second)) << '\t'
        << format_double(to_double(tokens.points[i].second)) << '\t'
        << (citations ? format_double(to_double(citations->points[i].second)) : "NA") << '\t'
        << (difference ? format_double(to_double(difference->points[i].second)) : "NA") << '\n';
  }
}

void write_plot_tsv(std::ostream& out, std::string_view label,
                    std::span<const SpectrumPoint> points) {
  out << "# format_version\t" << kFormatVersion << '\n';
  out << "# role\t" << label << '\n';
  out << "x\tsqrt_cum_type_share\tsqrt_cum_token_share\tsqrt_cum_article_share\t"
         "sqrt_cum_citation_share\n";
  if (points.empty()) return;
  const auto types = cumulative_share(points, Measure::Types);
  const auto tokens = cumulative_share(points, Measure::Tokens);
  const bool has_articles = total_of(points, Measure::Articles) > 0;
  const bool has_citations = total_of(points, Measure::Citations) > 0;
  std::optional<CumulativeSeries> articles;
  std::optional<CumulativeSeries> citations;
  if (has_articles) articles = cumulative_share(points, Measure::Articles);
  if (has_citations) citations = cumulative_share(points, Measure::Citations);
  auto y = [](const std::optional<CumulativeSeries>& s, std::size_t i) -> std::string {
    return s ? format_double(transform_y(to_double(s->points[i].second))) : "NA";
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << format_double(transform_x(points[i].g.to_double())) << '\t'
        << format_double(transform_y(to_double(types.points[i].second))) << '\t'
        << format_double(transform_y(to_double(tokens.points[i].second))) << '\t'
        << y(articles, i) << '\t' << y(citations, i) << '\n';
  }
}

MergedFile read_merged_tsv(std::istream& in) {
  MergedFile file;
  std::string line;
  std::size_t line_no = 0;
  bool versioned = false;
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
          throw FormatError("merged TSV: unsupported format_version");
        }
        versioned = true;
      } else if (fields[0] == "role" && fields.size() == 2) {
        file.role = fields[1];
      }
      continue;
    }
    const std::string where = "merged TSV line " + std::to_string(line_no);
    const auto fields = split_tabs(line);
    if (fields.size() != 6) throw FormatError(where + ": expected 6 fields");
    std::uint64_t v[6];
    for (std::size_t i = 0; i < 6; ++i) {
      const auto parsed = parse_u64(fields[i]);
      if (!parsed) throw FormatError(where + ": fields must be non-negative integers");
      v[i] = *parsed;
    }
    if (v[1] == 0 || v[0] > v[1]) throw FormatError(where + ": genderedness outside [0, 1]");
    if (std::gcd(v[0], v[1]) != 1) throw FormatError(where + ": genderedness not in lowest terms");
    SpectrumPoint p{Genderedness::from_ratio(v[0], v[1]), v[2], v[3], v[4], v[5]};
    if (!file.points.empty() && !(file.points.back().g < p.g)) {
      throw FormatError(where + ": rows must be strictly ascending in genderedness");
    }
    file.points.push_back(p);
  }
  if (in.bad()) throw IoError("error reading merged TSV");
  if (!versioned) throw FormatError("merged TSV: missing format_version header");
  return file;
}

}  // namespace onomast::analytics
