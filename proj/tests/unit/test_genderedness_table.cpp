#include <map>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "onomast/errors.hpp"
#include "onomast/genderedness_table.hpp"
#include "property.hpp"

namespace {

using namespace onomast::gender;
using onomast::extract::HumanEntityRecord;
using onomast::extract::Sex;

TEST(Score, Examples) {
  EXPECT_TRUE(score({10, 0}).is_one());
  EXPECT_TRUE(score({0, 3}).is_zero());
  const auto g = score({3, 1});
  EXPECT_EQ(g.numerator(), 3u);
  EXPECT_EQ(g.denominator(), 4u);
  EXPECT_DOUBLE_EQ(g.to_double(), 0.75);
}

TEST(Score, ZeroTotalIsAContractViolation) {
  EXPECT_THROW(score({0, 0}), onomast::ContractViolation);
  EXPECT_THROW(Genderedness::from_ratio(1, 0), onomast::ContractViolation);
  EXPECT_THROW(Genderedness::from_ratio(3, 2), onomast::ContractViolation);
}

TEST(Score, OrderingIsExact) {
  const auto third = Genderedness::from_ratio(1, 3);
  EXPECT_EQ(third, Genderedness::from_ratio(2, 6));
  // 1/3 and its nearest double-precision neighbourhood stay distinct.
  EXPECT_LT(Genderedness::from_ratio(333333333333333333ULL, 1000000000000000000ULL), third);
  // Both round to 1.0 as doubles.
  const std::uint64_t big = (1ULL << 63) + 1;
  const auto lo = Genderedness::from_ratio(big - 1, big);
  const auto hi = Genderedness::from_ratio(big, big + 1);
  EXPECT_EQ(lo.to_double(), hi.to_double());
  EXPECT_LT(lo, hi);
  EXPECT_FALSE(hi.is_one());
}

TEST(ScoreProperty, RangeEndpointsAndScaleInvariance) {
  onomast::testing::for_all(10000, [](onomast::testing::Gen& gen) {
    const SexCounts c{gen.count(), gen.count()};
    if (c.total() == 0) {
      EXPECT_THROW(score(c), onomast::ContractViolation);
      return;
    }
    const auto g = score(c);
    // in [0, 1] as a fraction
    EXPECT_LE(g.numerator(), g.denominator());
    EXPECT_GE(g.to_double(), 0.0);
    EXPECT_LE(g.to_double(), 1.0);
    // reduced
    EXPECT_EQ(std::gcd(g.numerator(), g.denominator()), 1u);
    // endpoints exactly when one class is absent
    EXPECT_EQ(g.is_one(), c.female == 0);
    EXPECT_EQ(g.is_zero(), c.male == 0);
    // value matches male / total by cross-multiplication
    EXPECT_EQ(static_cast<unsigned __int128>(g.numerator()) * c.total(),
              static_cast<unsigned __int128>(c.male) * g.denominator());
    const std::uint64_t k = gen.uniform(1, 1000);
    const auto scaled = score({c.male * k, c.female * k});
    EXPECT_EQ(scaled.numerator(), g.numerator());
    EXPECT_EQ(scaled.denominator(), g.denominator());
  });
}

GenderTable random_table(onomast::testing::Gen& gen) {
  GenderTable t;
  const std::vector<std::string> names = {"anna", "bob", "cy", "dee", "eve", "mary jane", "x_y"};
  for (int i = gen.range(0, 6); i > 0; --i) {
    SexCounts c{gen.uniform(0, 5), gen.uniform(0, 5)};
    if (c.total() == 0) c.male = 1;
    t.add(gen.pick(names), c);
  }
  if (gen.chance(0.5)) t.add_provenance({"d" + std::to_string(gen.uniform(0, 9)), "", 1, 1});
  return t;
}

TEST(MergeTables, Examples) {
  GenderTable a;
  a.add("a", {1, 0});
  GenderTable b;
  b.add("a", {0, 2});
  const auto m = merge_tables(a, b);
  ASSERT_NE(m.find("a"), nullptr);
  EXPECT_EQ(*m.find("a"), (SexCounts{1, 2}));
  EXPECT_EQ(merge_tables(a, GenderTable{}).entries(), a.entries());
}

TEST(MergeTablesProperty, CommutativeAssociativeWithIdentity) {
  onomast::testing::for_all(2000, [](onomast::testing::Gen& gen) {
    const auto a = random_table(gen);
    const auto b = random_table(gen);
    const auto c = random_table(gen);
    EXPECT_EQ(merge_tables(a, b).entries(), merge_tables(b, a).entries());
    const auto left = merge_tables(merge_tables(a, b), c);
    const auto right = merge_tables(a, merge_tables(b, c));
    EXPECT_EQ(left.entries(), right.entries());
    EXPECT_EQ(left.provenance(), right.provenance());
    EXPECT_EQ(merge_tables(a, GenderTable{}).entries(), a.entries());
    EXPECT_EQ(merge_tables(GenderTable{}, a).entries(), a.entries());
    // oracle: direct recount
    std::map<std::string, SexCounts> recount;
    for (const auto* t : {&a, &b, &c})
      for (const auto& [k, v] : t->entries()) recount[k] += v;
    EXPECT_EQ(left.entries().size(), recount.size());
    for (const auto& [k, v] : recount) {
      ASSERT_NE(left.find(k), nullptr);
      EXPECT_EQ(*left.find(k), v);
    }
  });
}

TEST(Accumulate, Examples) {
  const std::vector<HumanEntityRecord> two = {{1, {"douglas"}, Sex::Male},
                                              {2, {"douglas"}, Sex::Female}};
  const auto t = accumulate(two, {});
  EXPECT_EQ(*t.find("douglas"), (SexCounts{1, 1}));

  const std::vector<HumanEntityRecord> multi = {{1, {"jean", "pierre"}, Sex::Male}};
  const auto m = accumulate(multi, {});
  EXPECT_EQ(*m.find("jean"), (SexCounts{1, 0}));
  EXPECT_EQ(*m.find("pierre"), (SexCounts{1, 0}));
}

TEST(Accumulate, CountsEachEntityOncePerCleanName) {
  const std::vector<HumanEntityRecord> records = {
      {1, {"José", "Jose", "JOSE"}, Sex::Male}, {2, {"李", "A."}, Sex::Female}};
  AccumulateStats stats;
  const auto t = accumulate(records, {}, {"dump", "2024-01-01"}, &stats);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(*t.find("jose"), (SexCounts{1, 0}));
  EXPECT_EQ(stats.entities_seen, 2u);
  EXPECT_EQ(stats.entities_contributing, 1u);
  EXPECT_EQ(stats.names_dropped_empty, 2u);
  ASSERT_EQ(t.provenance().size(), 1u);
  EXPECT_EQ(t.provenance()[0], (Provenance{"dump", "2024-01-01", 1, 1}));
}

TEST(AccumulateProperty, SplitMergeEquivalence) {
  const std::vector<std::string> raw = {"Anna", "ANNA", "Bob", "J. Bob", "Mary Jane", "mary-jane",
                                        "Zoë", "Zoe", "李", "A. B.", "Chloé", "x"};
  onomast::testing::for_all(500, [&](onomast::testing::Gen& gen) {
    std::vector<HumanEntityRecord> records;
    const int n = gen.range(0, 1000);
    for (int i = 0; i < n; ++i) {
      HumanEntityRecord r{static_cast<onomast::extract::Qid>(i + 1), {},
                          gen.chance(0.5) ? Sex::Male : Sex::Female};
      for (int k = gen.range(1, 3); k > 0; --k) r.given_names.push_back(gen.pick(raw));
      records.push_back(std::move(r));
    }
    const std::size_t cut = gen.uniform(0, records.size());
    const std::span<const HumanEntityRecord> all(records);
    const auto whole = accumulate(all, {});
    const auto merged = merge_tables(accumulate(all.first(cut), {}), accumulate(all.subspan(cut), {}));
    EXPECT_EQ(whole.entries(), merged.entries());
  });
}

TEST(TableFile, RoundTrip) {
  GenderTable t;
  t.add("anna", {0, 12});
  t.add("mary jane", {1, 3});
  t.add("robert", {50, 1});
  t.add_provenance({"latest-truthy.nt.gz", "2024-05-01", 7807233, 65263});
  std::stringstream io;
  write_table_tsv(io, t);
  const auto back = read_table_tsv(io);
  EXPECT_EQ(back.entries(), t.entries());
  EXPECT_EQ(back.provenance(), t.provenance());
}

TEST(TableFile, RejectsInvalidContent) {
  const std::vector<std::string> bad = {
      "# format_version\t1\nanna\t0\t0\n",          // zero total
      "# format_version\t1\nAnna\t1\t0\n",          // not a clean name
      "# format_version\t1\nbob\t1\t0\nanna\t1\t0\n",  // unsorted
      "# format_version\t1\nanna\t1\n",             // missing column
      "# format_version\t1\nanna\t-1\t2\n",         // negative
      "# format_version\t9\n",                      // unknown version
      "anna\t1\t0\n",                               // no header
  };
  for (const auto& text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_table_tsv(in), onomast::FormatError) << text;
  }
}

}  // namespace
