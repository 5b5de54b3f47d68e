#pragma once

// Type/token spectra along the genderedness axis and the cumulative
// statistics derived from them. All shares are exact rationals; doubles are
// produced only when writing files.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "onomast/biblio_merge.hpp"
#include "onomast/genderedness_table.hpp"

namespace onomast::analytics {

using Rational = boost::multiprecision::cpp_rational;
using gender::Genderedness;

Rational to_rational(const Genderedness& g);

// Parses a plain decimal ("0.005", "1", ".5") into an exact fraction.
std::optional<Rational> parse_decimal(std::string_view text);

struct SpectrumPoint {
  Genderedness g;
  std::uint64_t types = 0;
  std::uint64_t tokens = 0;
  std::uint64_t articles = 0;
  std::uint64_t citations = 0;

  friend bool operator==(const SpectrumPoint&, const SpectrumPoint&) = default;
};

enum class Measure : std::uint8_t { Types, Tokens, Articles, Citations };

std::string_view to_string(Measure measure);
std::uint64_t value_of(const SpectrumPoint& point, Measure measure);

// One point per distinct genderedness value, ascending.
std::vector<SpectrumPoint> spectrum(const biblio::RoleDataset& dataset);

// Names of the table as types, (entity, name) pairs as tokens.
std::vector<SpectrumPoint> spectrum(const gender::GenderTable& table);

struct CumulativeSeries {
  Measure measure = Measure::Tokens;
  std::vector<std::pair<Genderedness, Rational>> points;
};

// Running share of `measure`. Throws ContractViolation on a zero total.
CumulativeSeries cumulative_share(std::span<const SpectrumPoint> points, Measure measure);

struct DifferenceSeries {
  std::vector<std::pair<Genderedness, Rational>> points;
};

// Cumulative citation share minus cumulative article share at every point.
// Throws ContractViolation when either total is zero.
DifferenceSeries cumulative_difference(std::span<const SpectrumPoint> points);
DifferenceSeries cumulative_difference(const biblio::RoleDataset& dataset);

// Share of `measure` held by points with g < alpha or g > 1 - alpha.
// Requires 0 < alpha < 1/2 and a non-zero total.
Rational top_share(std::span<const SpectrumPoint> points, Measure measure, const Rational& alpha);

// Share of `measure` held by points with g >= threshold.
Rational share_at_least(std::span<const SpectrumPoint> points, Measure measure,
                        const Rational& threshold);

struct PlotPoint {
  double x = 0;
  double y = 0;
};

// x -> asin(sqrt(x)) / (pi/2) on [0, 1]; y -> sqrt(y) on [0, inf).
double transform_x(double x);
double transform_y(double y);
PlotPoint transform_axes(PlotPoint p);

struct RoleReport {
  std::string label;
  std::size_t points = 0;
  std::uint64_t total_types = 0;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_articles = 0;
  std::uint64_t total_citations = 0;
  Rational top_type_share;
  Rational top_token_share;
  Rational top_article_share;
  Rational top_citation_share;
  Rational type_share_masculine;  // g >= 9999/10000
  std::optional<std::pair<Genderedness, Rational>> difference_min;
  std::optional<std::pair<Genderedness, Rational>> difference_max;
};

struct TableReport {
  RoleReport names;  // types = names, tokens = (entity, name) pairs
  std::uint64_t entities = 0;
};

struct Report {
  Rational alpha;
  std::vector<RoleReport> roles;
  std::optional<TableReport> table;
};

RoleReport report_role(std::string label, std::span<const SpectrumPoint> points,
                       const Rational& alpha);

// Requires at least one role with a non-empty spectrum.
Report report(const std::vector<std::pair<std::string, std::vector<SpectrumPoint>>>& roles,
              const Rational& alpha, const gender::GenderTable* table = nullptr);

std::string report_to_json(const Report& report);

inline constexpr int kFormatVersion = 1;

// Twelve significant digits, shortest form ("%.12g").
std::string format_double(double value);
double to_double(const Rational& value);

enum class TransformMode : std::uint8_t { None, Paper };

std::optional<TransformMode> parse_transform(std::string_view text);

// Per-role analysis TSV: g, g_transformed, types, tokens, citations,
// cumulative type/token/citation shares and the cumulative difference.
void write_role_tsv(std::ostream& out, std::string_view label,
                    std::span<const SpectrumPoint> points, TransformMode mode);

// Plot rows with both axes rescaled: x', sqrt of cumulative type, token,
// article and citation shares.
void write_plot_tsv(std::ostream& out, std::string_view label,
                    std::span<const SpectrumPoint> points);

struct MergedFile {
  std::string role;
  std::vector<SpectrumPoint> points;
};

// Reads the output of biblio::write_merged_tsv.
MergedFile read_merged_tsv(std::istream& in);

}  // namespace onomast::analytics
