#include <fstream>
#include <regex>
#include <string>

#include <gtest/gtest.h>

#include "onomast/name_normalizer.hpp"
#include "property.hpp"

namespace {

using onomast::names::clean;
using onomast::names::NormalizerOptions;
using onomast::names::transliterate_ascii;

std::string cleaned(std::string_view raw, std::size_t cap = 3) {
  auto name = clean(raw, NormalizerOptions{cap});
  return name ? name->text() : std::string();
}

TEST(Transliterate, LatinLettersMapToAscii) {
  EXPECT_EQ(transliterate_ascii("Émile"), "Emile");
  EXPECT_EQ(transliterate_ascii("Robert"), "Robert");
  EXPECT_EQ(transliterate_ascii("ß"), "ss");
  EXPECT_EQ(transliterate_ascii("ø"), "o");
  EXPECT_EQ(transliterate_ascii("Đ"), "D");
  EXPECT_EQ(transliterate_ascii("Łódź"), "Lodz");
  EXPECT_EQ(transliterate_ascii("Nguyễn"), "Nguyen");
}

TEST(Transliterate, DropsCodePointsOutsideTheTable) {
  EXPECT_EQ(transliterate_ascii("李"), "");
  EXPECT_EQ(transliterate_ascii("Анна"), "");
  EXPECT_EQ(transliterate_ascii("a😀b"), "ab");
}

TEST(Transliterate, DropsInvalidUtf8) {
  EXPECT_EQ(transliterate_ascii("a\xC3"), "a");
  EXPECT_EQ(transliterate_ascii("a\xFF" "b"), "ab");
  EXPECT_EQ(transliterate_ascii("\xE2\x82"), "");
  // overlong encoding of '/'
  EXPECT_EQ(transliterate_ascii("\xC0\xAF"), "");
}

TEST(Clean, DocumentedExamples) {
  EXPECT_EQ(cleaned("J. Robert"), "robert");
  EXPECT_EQ(cleaned("Mary-Anne"), "mary anne");
  EXPECT_FALSE(clean("A. B."));
  EXPECT_EQ(cleaned("anna"), "anna");
  EXPECT_EQ(cleaned("TJ Henry"), "henry");
}

TEST(Clean, InitialsCapIsConfigurable) {
  EXPECT_EQ(cleaned("MARIA"), "maria");
  EXPECT_EQ(cleaned("MARIA", 0), "");
  EXPECT_EQ(cleaned("JRR Tolkien", 2), "jrr tolkien");
  EXPECT_EQ(cleaned("JRR Tolkien", 3), "tolkien");
  EXPECT_EQ(cleaned("JRRT Tolkien", 0), "tolkien");
}

TEST(Clean, TransliterationHappensBeforeInitialStripping) {
  // Æ becomes AE, an all-uppercase pair.
  EXPECT_EQ(cleaned("ÆB"), "");
  EXPECT_EQ(cleaned("Æsa"), "aesa");
  EXPECT_EQ(cleaned("ÉM"), "");
}

TEST(Clean, TokensAndCompoundFlag) {
  auto name = clean("Anne-Sophie  Marie");
  ASSERT_TRUE(name);
  EXPECT_EQ(name->tokens(), (std::vector<std::string>{"anne", "sophie", "marie"}));
  EXPECT_TRUE(name->compound());
  EXPECT_EQ(onomast::names::first_token(*name), "anne");

  auto single = clean("Robert");
  ASSERT_TRUE(single);
  EXPECT_FALSE(single->compound());
  EXPECT_EQ(onomast::names::first_token(*single), "robert");

  auto pair = clean("mary jane");
  ASSERT_TRUE(pair);
  EXPECT_EQ(onomast::names::first_token(*pair), "mary");
}

struct GoldenCase {
  std::string input;
  std::string expected;
};

std::vector<GoldenCase> load_golden() {
  std::ifstream in(std::string(ONOMAST_FIXTURES_DIR) + "/normalize_golden.tsv", std::ios::binary);
  std::vector<GoldenCase> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    cases.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return cases;
}

TEST(Clean, GoldenCorpus) {
  const auto cases = load_golden();
  ASSERT_EQ(cases.size(), 200u);
  for (const auto& c : cases) EXPECT_EQ(cleaned(c.input), c.expected) << "input: " << c.input;
}

const std::regex kCleanShape("^[a-z0-9_]+( [a-z0-9_]+)*$");

TEST(CleanProperty, OutputAlphabetAndIdempotence) {
  onomast::testing::for_all(5000, [](onomast::testing::Gen& gen) {
    const std::string raw = gen.messy_text(12);
    const std::size_t cap = gen.uniform(0, 5);
    const auto name = clean(raw, NormalizerOptions{cap});
    if (!name) return;
    ASSERT_TRUE(std::regex_match(name->text(), kCleanShape)) << raw;
    const auto again = clean(name->text(), NormalizerOptions{cap});
    ASSERT_TRUE(again) << raw;
    EXPECT_EQ(again->text(), name->text()) << raw;
    std::string joined;
    for (const auto& t : name->tokens()) {
      EXPECT_GT(t.size(), 1u) << raw;
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    EXPECT_EQ(joined, name->text());
  });
}

// Surviving tokens are exactly the qualifying ASCII tokens, lower-cased,
// in input order.
TEST(CleanProperty, TokensFollowInputOrder) {
  onomast::testing::for_all(3000, [](onomast::testing::Gen& gen) {
    std::vector<std::string> words;
    std::string raw;
    const int n = gen.range(1, 6);
    for (int i = 0; i < n; ++i) {
      std::string w = gen.ascii_word(1, 6);
      if (gen.chance(0.3)) {
        for (char& c : w) c = static_cast<char>(c - 'a' + 'A');
      } else if (gen.chance(0.5)) {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
      }
      words.push_back(w);
      raw += w;
      raw += gen.pick(std::vector<std::string>{" ", "-", ". ", ", ", "'"});
    }
    std::vector<std::string> expected;
    for (const auto& w : words) {
      const bool upper = std::all_of(w.begin(), w.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
      if (w.size() == 1 || (upper && w.size() <= 3)) continue;
      std::string lower = w;
      for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      expected.push_back(lower);
    }
    const auto name = clean(raw);
    if (expected.empty()) {
      EXPECT_FALSE(name) << raw;
    } else {
      ASSERT_TRUE(name) << raw;
      EXPECT_EQ(name->tokens(), expected) << raw;
    }
  });
}

}  // namespace
