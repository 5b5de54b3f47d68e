#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "onomast/analytics.hpp"
#include "onomast/errors.hpp"
#include "property.hpp"

namespace {

using namespace onomast::analytics;
using onomast::ContractViolation;

Genderedness G(std::uint64_t n, std::uint64_t d) { return Genderedness::from_ratio(n, d); }

SpectrumPoint point(Genderedness g, std::uint64_t types, std::uint64_t tokens,
                    std::uint64_t citations) {
  return SpectrumPoint{g, types, tokens, tokens, citations};
}

std::vector<Rational> shares(const CumulativeSeries& s) {
  std::vector<Rational> out;
  for (const auto& [g, v] : s.points) out.push_back(v);
  return out;
}

TEST(Decimal, ParsesExactly) {
  EXPECT_EQ(parse_decimal("0.005"), Rational(1, 200));
  EXPECT_EQ(parse_decimal(".5"), Rational(1, 2));
  EXPECT_EQ(parse_decimal("1"), Rational(1));
  EXPECT_EQ(parse_decimal("0.9999"), Rational(9999, 10000));
  EXPECT_FALSE(parse_decimal(""));
  EXPECT_FALSE(parse_decimal("1e-3"));
  EXPECT_FALSE(parse_decimal("-0.1"));
  EXPECT_FALSE(parse_decimal("0.1.2"));
}

TEST(Spectrum, SortsAndMergesEqualFractions) {
  onomast::biblio::RoleDataset d;
  d.buckets[G(1, 2)] = {{"a"}, 3, 3, 7};
  d.buckets[G(0, 1)] = {{"b", "c"}, 2, 2, 1};
  d.buckets[G(2, 6)] = {{"e"}, 1, 1, 1};
  d.buckets[G(1, 3)].tokens += 1;  // same key as 2/6
  const auto s = spectrum(d);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].g, G(0, 1));
  EXPECT_EQ(s[1].g, G(1, 3));
  EXPECT_EQ(s[1].tokens, 2u);
  EXPECT_EQ(s[2].g, G(1, 2));
  EXPECT_EQ(s[2].types, 1u);
  EXPECT_TRUE(spectrum(onomast::biblio::RoleDataset{}).empty());
}

TEST(Spectrum, FromGenderTable) {
  onomast::gender::GenderTable t;
  t.add("ann", {0, 3});
  t.add("bob", {4, 0});
  t.add("cy", {1, 1});
  t.add("dee", {2, 2});
  const auto s = spectrum(t);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].g, G(1, 2));
  EXPECT_EQ(s[1].types, 2u);
  EXPECT_EQ(s[1].tokens, 6u);
}

TEST(Cumulative, Examples) {
  EXPECT_EQ(shares(cumulative_share(std::vector{point(G(0, 1), 1, 2, 0), point(G(1, 1), 1, 2, 0)},
                                    Measure::Tokens)),
            (std::vector<Rational>{Rational(1, 2), Rational(1)}));
  EXPECT_EQ(shares(cumulative_share(std::vector{point(G(1, 2), 1, 5, 0)}, Measure::Tokens)),
            (std::vector<Rational>{Rational(1)}));
  EXPECT_EQ(shares(cumulative_share(std::vector{point(G(0, 1), 1, 1, 0), point(G(1, 2), 1, 1, 0),
                                                point(G(1, 1), 1, 2, 0)},
                                    Measure::Tokens)),
            (std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1)}));
}

TEST(Cumulative, ZeroTotalIsAContractViolation) {
  EXPECT_THROW(cumulative_share(std::vector{point(G(0, 1), 1, 1, 0)}, Measure::Citations),
               ContractViolation);
  EXPECT_THROW(cumulative_share(std::vector<SpectrumPoint>{}, Measure::Tokens), ContractViolation);
  EXPECT_THROW(cumulative_difference(std::vector{point(G(0, 1), 1, 1, 0)}), ContractViolation);
}

TEST(Difference, Examples) {
  const auto d = cumulative_difference(std::vector{point(G(0, 1), 1, 2, 1), point(G(1, 1), 1, 2, 3)});
  ASSERT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.points[0].second, Rational(-1, 4));
  EXPECT_EQ(d.points[1].second, Rational(0));

  const auto prop = cumulative_difference(
      std::vector{point(G(0, 1), 1, 2, 6), point(G(1, 3), 1, 5, 15), point(G(1, 1), 1, 1, 3)});
  for (const auto& [g, v] : prop.points) EXPECT_EQ(v, 0);

  const auto one = cumulative_difference(std::vector{point(G(2, 5), 1, 4, 9)});
  ASSERT_EQ(one.points.size(), 1u);
  EXPECT_EQ(one.points[0].second, 0);
}

TEST(TopShare, Examples) {
  const Rational alpha(1, 200);
  EXPECT_EQ(top_share(std::vector{point(G(1, 2), 3, 3, 0)}, Measure::Tokens, alpha), 0);
  EXPECT_EQ(top_share(std::vector{point(G(0, 1), 1, 2, 0), point(G(1, 1), 1, 5, 0)},
                      Measure::Tokens, alpha),
            1);
  EXPECT_EQ(top_share(std::vector{point(G(0, 1), 1, 1, 0), point(G(4, 1000), 1, 1, 0),
                                  point(G(1, 2), 1, 1, 0), point(G(1, 1), 1, 1, 0)},
                      Measure::Tokens, alpha),
            Rational(3, 4));
}

TEST(TopShare, ComparisonsAreStrict) {
  const Rational alpha(1, 200);
  const std::vector pts = {point(G(1, 200), 1, 1, 0), point(G(199, 200), 1, 1, 0),
                           point(G(1, 2), 1, 2, 0)};
  EXPECT_EQ(top_share(pts, Measure::Tokens, alpha), 0);
}

TEST(TopShare, AlphaOutOfRangeIsAContractViolation) {
  const std::vector pts = {point(G(0, 1), 1, 1, 0)};
  EXPECT_THROW(top_share(pts, Measure::Tokens, Rational(0)), ContractViolation);
  EXPECT_THROW(top_share(pts, Measure::Tokens, Rational(1, 2)), ContractViolation);
  EXPECT_THROW(top_share(pts, Measure::Tokens, Rational(-1, 10)), ContractViolation);
}

TEST(Transform, FixedPointsAndValues) {
  EXPECT_EQ(transform_x(0.0), 0.0);
  EXPECT_NEAR(transform_x(0.5), 0.5, 1e-15);
  EXPECT_NEAR(transform_x(1.0), 1.0, 1e-15);
  EXPECT_EQ(transform_y(0.25), 0.5);
  EXPECT_THROW(transform_x(-0.01), ContractViolation);
  EXPECT_THROW(transform_x(1.01), ContractViolation);
  EXPECT_THROW(transform_y(-1.0), ContractViolation);
  EXPECT_THROW(transform_x(std::nan("")), ContractViolation);
}

TEST(TransformProperty, StrictlyMonotone) {
  onomast::testing::for_all(2000, [](onomast::testing::Gen& gen) {
    const double a = static_cast<double>(gen.uniform(0, 1'000'000)) / 1e6;
    const double b = static_cast<double>(gen.uniform(0, 1'000'000)) / 1e6;
    if (a == b) return;
    const double lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_LT(transform_x(lo), transform_x(hi));
    EXPECT_LT(transform_y(lo * 50), transform_y(hi * 50));
    const auto p = transform_axes({lo, hi});
    EXPECT_EQ(p.x, transform_x(lo));
    EXPECT_EQ(p.y, transform_y(hi));
  });
}

std::vector<SpectrumPoint> random_points(onomast::testing::Gen& gen, std::size_t max_points) {
  std::map<Genderedness, SpectrumPoint> by_g;
  const std::size_t n = gen.uniform(1, max_points);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t den = gen.uniform(1, 400);
    const auto g = G(gen.uniform(0, den), den);
    auto& p = by_g[g];
    p.g = g;
    p.types += gen.uniform(1, 5);
    p.tokens += p.types + gen.uniform(0, 20);
    p.articles = p.tokens;
    p.citations += gen.chance(0.2) ? 0 : gen.uniform(0, 5000);
  }
  std::vector<SpectrumPoint> out;
  for (auto& [g, p] : by_g) out.push_back(p);
  if (std::all_of(out.begin(), out.end(), [](const auto& p) { return p.citations == 0; })) {
    out.back().citations = 1;
  }
  return out;
}

// Right-continuous step function evaluation at arbitrary g.
Rational step_share(const std::vector<SpectrumPoint>& pts, Measure m, const Genderedness& at) {
  std::uint64_t total = 0, below = 0;
  for (const auto& p : pts) {
    total += value_of(p, m);
    if (p.g <= at) below += value_of(p, m);
  }
  return Rational(below, total);
}

TEST(CumulativeProperty, SeriesInvariants) {
  onomast::testing::for_all(1000, [](onomast::testing::Gen& gen) {
    const auto pts = random_points(gen, 500);
    for (Measure m : {Measure::Types, Measure::Tokens, Measure::Articles, Measure::Citations}) {
      const auto s = cumulative_share(pts, m);
      ASSERT_EQ(s.points.size(), pts.size());
      for (std::size_t i = 1; i < s.points.size(); ++i) {
        EXPECT_LE(s.points[i - 1].second, s.points[i].second);
        EXPECT_LT(s.points[i - 1].first, s.points[i].first);
      }
      EXPECT_EQ(s.points.back().second, 1);
    }
    const auto d = cumulative_difference(pts);
    EXPECT_EQ(d.points.back().second, 0);
    for (std::size_t i = 0; i < pts.size(); i += 1 + pts.size() / 7) {
      const auto& g = pts[i].g;
      EXPECT_EQ(d.points[i].second,
                step_share(pts, Measure::Citations, g) - step_share(pts, Measure::Articles, g));
      EXPECT_LE(abs(d.points[i].second), 1);
    }
  });
}

TEST(CumulativeProperty, ProportionalCitationsGiveZeroDifference) {
  onomast::testing::for_all(1000, [](onomast::testing::Gen& gen) {
    auto pts = random_points(gen, 500);
    const std::uint64_t k = gen.uniform(1, 50);
    for (auto& p : pts) p.citations = p.articles * k;
    for (const auto& [g, v] : cumulative_difference(pts).points) EXPECT_EQ(v, 0);
  });
}

TEST(CumulativeProperty, TopShareMonotoneInAlpha) {
  onomast::testing::for_all(1000, [](onomast::testing::Gen& gen) {
    const auto pts = random_points(gen, 500);
    const std::uint64_t a = gen.uniform(1, 499), b = gen.uniform(1, 499);
    const Rational lo(std::min(a, b), 1000), hi(std::max(a, b), 1000);
    for (Measure m : {Measure::Types, Measure::Tokens, Measure::Citations}) {
      const auto x = top_share(pts, m, lo);
      const auto y = top_share(pts, m, hi);
      EXPECT_LE(x, y);
      EXPECT_GE(x, 0);
      EXPECT_LE(y, 1);
    }
  });
}

TEST(Report, TwoNameFixtureByHand) {
  // ann: g = 0, 3 tokens, 9 citations; bob: g = 1, 1 token, 3 citations.
  const std::vector pts = {point(G(0, 1), 1, 3, 9), point(G(1, 1), 1, 1, 3)};
  const auto r = report_role("first", pts, Rational(1, 200));
  EXPECT_EQ(r.points, 2u);
  EXPECT_EQ(r.total_types, 2u);
  EXPECT_EQ(r.total_tokens, 4u);
  EXPECT_EQ(r.total_citations, 12u);
  EXPECT_EQ(r.top_type_share, 1);
  EXPECT_EQ(r.top_token_share, 1);
  EXPECT_EQ(r.type_share_masculine, Rational(1, 2));
  ASSERT_TRUE(r.difference_min && r.difference_max);
  // D(0) = 9/12 - 3/4 = 0, D(1) = 0.
  EXPECT_EQ(r.difference_min->second, 0);
  EXPECT_EQ(r.difference_max->second, 0);
}

TEST(Report, RequiresANonEmptyRole) {
  EXPECT_THROW(report({{"first", {}}}, Rational(1, 200)), ContractViolation);
}

TEST(Report, JsonCarriesVersionAndSections) {
  const std::vector pts = {point(G(0, 1), 1, 1, 1), point(G(2, 3), 2, 3, 0)};
  onomast::gender::GenderTable table;
  table.add("ann", {0, 2});
  table.add("bob", {9999, 1});
  const auto j = nlohmann::json::parse(report_to_json(report({{"first", pts}, {"last", {}}},
                                                             Rational(1, 200), &table)));
  EXPECT_EQ(j["format_version"], 1);
  ASSERT_EQ(j["roles"].size(), 2u);
  EXPECT_EQ(j["roles"][0]["label"], "first");
  EXPECT_EQ(j["wikidata"]["token_counting"], "entity_name_pairs");
}

TEST(Emission, FormatDouble) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(0.25), "0.25");
}

TEST(Emission, RoleTsvByHand) {
  const std::vector pts = {point(G(0, 1), 1, 2, 1), point(G(1, 1), 1, 2, 3)};
  std::ostringstream out;
  write_role_tsv(out, "first", pts, TransformMode::None);
  EXPECT_EQ(out.str(),
            "# format_version\t1\n# role\tfirst\n# transform\tnone\n"
            "g\tg_transformed\ttypes\ttokens\tcitations\tcum_type_share\tcum_token_share\t"
            "cum_citation_share\tD\n"
            "0\t0\t1\t2\t1\t0.5\t0.5\t0.25\t-0.25\n"
            "1\t1\t1\t2\t3\t1\t1\t1\t0\n");
}

TEST(Emission, MergedFileRoundTrip) {
  std::istringstream in(
      "# format_version\t1\n# role\tlast\n"
      "# genderedness_num\tgenderedness_den\ttypes\ttokens\tarticles\tcitations\n"
      "0\t1\t2\t3\t3\t4\n1\t2\t1\t1\t1\t0\n");
  const auto f = read_merged_tsv(in);
  EXPECT_EQ(f.role, "last");
  ASSERT_EQ(f.points.size(), 2u);
  EXPECT_EQ(f.points[1], (SpectrumPoint{G(1, 2), 1, 1, 1, 0}));
}

TEST(Emission, MergedFileRejectsUnsortedOrUnreduced) {
  for (const char* body : {"1\t2\t1\t1\t1\t0\n0\t1\t1\t1\t1\t0\n", "2\t4\t1\t1\t1\t0\n",
                           "3\t2\t1\t1\t1\t0\n", "0\t1\t1\t1\n"}) {
    std::istringstream in(std::string("# format_version\t1\n") + body);
    EXPECT_THROW(read_merged_tsv(in), onomast::FormatError) << body;
  }
}

}  // namespace
