#include <gtest/gtest.h>

#include <set>

#include "instrind/common.hpp"
#include "instrind/number_words.hpp"
#include "instrind/types.hpp"

using namespace instrind;

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Rng, EngineIsTheStandardOne) {
  // The standard fixes mt19937_64's 10000th output for the default seed.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
  Rng r(5489);
  for (int i = 0; i < 9999; ++i) r.next();
  EXPECT_EQ(r.next(), 9981545732273789042ULL);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto x = r.below(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(3);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  auto w = v;
  r.shuffle(w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, SampleIndicesAreDistinct) {
  Rng r(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto idx = r.sample_indices(20, 5);
    ASSERT_EQ(idx.size(), 5u);
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 5u);
    for (auto i : idx) EXPECT_LT(i, 20u);
  }
  EXPECT_EQ(r.sample_indices(3, 10).size(), 3u);
}

TEST(Rng, DerivedSeedsDependOnLabel) {
  EXPECT_EQ(derive_seed(7, "generate/sum"), derive_seed(7, "generate/sum"));
  EXPECT_NE(derive_seed(7, "generate/sum"), derive_seed(7, "generate/diff"));
  EXPECT_NE(derive_seed(7, "generate/sum"), derive_seed(8, "generate/sum"));
}

TEST(Strings, SplitTrimLines) {
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split_ws("  a \t b\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(trim(" \tx y\n"), "x y");
  EXPECT_EQ(to_lower("AbC-É"), "abc-É");
  EXPECT_EQ(lines_of("a\r\nb\n"), (std::vector<std::string>{"a", "b"}));
}

TEST(Types, TaskAndMetricNamesRoundTrip) {
  for (auto t : kAllTasks) EXPECT_EQ(parse_task(task_name(t)), t);
  EXPECT_EQ(metric_for(TaskId::synonyms), MetricKind::contains_gold);
  EXPECT_EQ(metric_for(TaskId::larger_animal), MetricKind::exact_match);
  EXPECT_EQ(metric_for(TaskId::translation_fr), MetricKind::in_gold_set);
  EXPECT_EQ(metric_for(TaskId::formality), MetricKind::unigram_f1);
  try {
    parse_task("frist_letter");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
    EXPECT_NE(std::string(e.what()).find("first_letter"), std::string::npos);
  }
}

// Written out independently of the library's tens/ones composition.
static std::string spell(unsigned n) {
  static const char* small[] = {"zero",    "one",     "two",       "three",    "four",     "five",    "six",
                                "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
                                "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
  static const char* tens[] = {"", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
  auto below_hundred = [&](unsigned x) -> std::string {
    if (x < 20) return small[x];
    return std::string(tens[x / 10]) + (x % 10 ? std::string("-") + small[x % 10] : "");
  };
  auto below_thousand = [&](unsigned x) -> std::string {
    std::string out;
    if (x >= 100) out = std::string(small[x / 100]) + " hundred";
    if (x % 100) out += (out.empty() ? "" : " ") + below_hundred(x % 100);
    return out;
  };
  if (n == 0) return "zero";
  std::string out;
  if (n >= 1000) out = below_thousand(n / 1000) + " thousand";
  if (n % 1000) out += (out.empty() ? "" : " ") + below_thousand(n % 1000);
  return out;
}

TEST(NumberWords, MatchesIndependentSpelling) {
  EXPECT_EQ(number_to_words(26), "twenty-six");
  EXPECT_EQ(number_to_words(1205), "one thousand two hundred five");
  for (unsigned n = 0; n < 10000; ++n) ASSERT_EQ(number_to_words(n), spell(n)) << n;
}
