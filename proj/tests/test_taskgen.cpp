#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "instrind/taskgen.hpp"
#include "test_support.hpp"

using namespace instrind;
using namespace instrind::taskgen;
using testsupport::TempDir;

namespace {

const corpus::SourceManifest& fixture_manifest() {
  static const auto m = testsupport::manifest();
  return m;
}

TaskDataset gen(TaskId t, std::uint64_t seed = 7) { return generate_task(t, fixture_manifest(), seed); }

std::set<std::string> inputs_of(const std::vector<Demonstration>& v) {
  std::set<std::string> out;
  for (const auto& d : v) out.insert(d.input);
  return out;
}

std::pair<int, int> two_ints(const std::string& s) {
  std::istringstream in(s);
  int a = -1, b = -1;
  in >> a >> b;
  return {a, b};
}

}  // namespace

TEST(Arithmetic, SumCoversEveryPairOnce) {
  const auto ds = gen(TaskId::sum);
  EXPECT_EQ(ds.execute.size(), 100u);
  EXPECT_EQ(ds.induce.size() + ds.execute.size(), 10000u);
  std::set<std::pair<int, int>> seen;
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      const auto [a, b] = two_ints(d.input);
      ASSERT_GE(a, 0);
      ASSERT_LE(a, 99);
      ASSERT_GE(b, 0);
      ASSERT_LE(b, 99);
      EXPECT_EQ(d.gold, std::vector<std::string>{std::to_string(a + b)});
      seen.emplace(a, b);
    }
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Arithmetic, SumExample) {
  const auto ds = gen(TaskId::sum);
  bool found = false;
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      if (d.input == "22 10") {
        EXPECT_EQ(d.first_gold(), "32");
        found = true;
      }
    }
  }
  EXPECT_TRUE(found);
}

TEST(Arithmetic, DiffIsNonNegativeOverTheTriangle) {
  const auto ds = gen(TaskId::diff);
  EXPECT_EQ(ds.induce.size() + ds.execute.size(), 19900u);
  std::set<std::pair<int, int>> seen;
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      const auto [a, b] = two_ints(d.input);
      ASSERT_GE(b, 0);
      ASSERT_LE(b, a);
      ASSERT_LE(a, 198);
      EXPECT_EQ(d.first_gold(), std::to_string(a - b));
      seen.emplace(a, b);
    }
  }
  EXPECT_EQ(seen.size(), 19900u);
}

TEST(Arithmetic, NumToWordCoversZeroTo9999) {
  const auto ds = gen(TaskId::num_to_word);
  EXPECT_EQ(ds.induce.size() + ds.execute.size(), 10000u);
  std::set<int> seen;
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      const int n = std::stoi(d.input);
      EXPECT_EQ(d.first_gold(), number_to_words(static_cast<std::uint32_t>(n)));
      seen.insert(n);
    }
  }
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), 9999);
}

TEST(Letters, GoldFollowsFromTheWord) {
  for (auto t : {TaskId::first_letter, TaskId::second_letter, TaskId::list_letters}) {
    const auto ds = gen(t);
    ASSERT_FALSE(ds.execute.empty());
    for (const auto* split : {&ds.induce, &ds.execute}) {
      for (const auto& d : *split) {
        std::string want;
        if (t == TaskId::first_letter) want = d.input.substr(0, 1);
        else if (t == TaskId::second_letter) want = d.input.substr(1, 1);
        else
          for (std::size_t i = 0; i < d.input.size(); ++i) want += (i ? " " : "") + d.input.substr(i, 1);
        EXPECT_EQ(d.gold, std::vector<std::string>{want}) << d.input;
      }
    }
  }
}

TEST(Splits, InputsNeverCrossSplits) {
  for (auto t : kAllTasks) {
    const auto ds = gen(t);
    const auto held = inputs_of(ds.execute);
    for (const auto& d : ds.induce) EXPECT_FALSE(held.count(d.input)) << task_name(t) << ": " << d.input;
    EXPECT_FALSE(ds.execute.empty()) << task_name(t);
    EXPECT_GE(ds.induce.size(), 5u) << task_name(t);
    for (const auto* split : {&ds.induce, &ds.execute}) {
      for (const auto& d : *split) EXPECT_NO_THROW(validate(d));
    }
  }
}

TEST(Splits, GenerationIsDeterministicInSeed) {
  for (auto t : {TaskId::membership, TaskId::rhymes, TaskId::sentiment, TaskId::sum, TaskId::cause_selection}) {
    EXPECT_EQ(gen(t, 11), gen(t, 11)) << task_name(t);
  }
  EXPECT_NE(gen(TaskId::sum, 11).execute, gen(TaskId::sum, 12).execute);
}

TEST(StartingWith, GoldListsTheMatchingWordsInOrder) {
  const auto ds = gen(TaskId::starting_with);
  const std::regex shape(R"(^(.*) \[([a-z])\]$)");
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      std::smatch m;
      ASSERT_TRUE(std::regex_match(d.input, m, shape)) << d.input;
      const char letter = m[2].str()[0];
      std::vector<std::string> want;
      std::set<std::string> seen;
      std::istringstream in(m[1].str());
      std::string tok;
      while (in >> tok) {
        const auto b = tok.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789");
        const auto e = tok.find_last_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789");
        if (b == std::string::npos) continue;
        const auto w = tok.substr(b, e - b + 1);
        if (std::tolower(static_cast<unsigned char>(w[0])) != letter) continue;
        if (seen.insert(to_lower(w)).second) want.push_back(w);
      }
      EXPECT_EQ(d.first_gold(), join(want, ", ")) << d.input;
    }
  }
}

TEST(Membership, ItemsFollowTheConstructionRules) {
  const auto ds = gen(TaskId::membership);
  const auto lex = corpus::load_lexicon(fixture_manifest());
  std::map<std::string, std::string> category;
  for (const auto& it : lex.items) category[it.word] = it.category;
  EXPECT_EQ(ds.execute.size(), 100u);
  std::set<std::string> induce_words, execute_words;
  for (const auto* part : {&ds.induce, &ds.execute}) {
    for (const auto& d : *part) {
      std::vector<std::string> words;
      for (const auto& w : split(d.input, ',')) words.push_back(trim(w));
      EXPECT_GE(words.size(), 5u);
      EXPECT_LE(words.size(), 7u);
      std::vector<std::string> gold;
      std::set<std::string> other_cats;
      for (const auto& w : words) {
        if (category.at(w) == "animals") gold.push_back(w);
        else other_cats.insert(category.at(w));
        (part == &ds.induce ? induce_words : execute_words).insert(w);
      }
      EXPECT_GE(gold.size(), 3u);
      EXPECT_LE(gold.size(), 4u);
      EXPECT_EQ(other_cats.size(), 1u) << d.input;
      EXPECT_EQ(d.first_gold(), join(gold, ", "));
    }
  }
  for (const auto& w : execute_words) EXPECT_FALSE(induce_words.count(w)) << w;
}

TEST(Rhymes, GoldIsTheRestOfTheGroup) {
  const auto ds = gen(TaskId::rhymes);
  const auto groups = corpus::load_rhyme_groups(fixture_manifest());
  std::set<std::string> induce_groups, execute_groups;
  for (const auto* split : {&ds.induce, &ds.execute}) {
    for (const auto& d : *split) {
      const auto* g = groups.group_of(d.input);
      ASSERT_NE(g, nullptr);
      std::vector<std::string> want;
      for (const auto& w : g->words)
        if (w != d.input) want.push_back(w);
      EXPECT_EQ(d.gold, want);
      (split == &ds.induce ? induce_groups : execute_groups).insert(d.aux.at("rhyme_group"));
    }
  }
  for (const auto& g : execute_groups) EXPECT_FALSE(induce_groups.count(g));
}

TEST(CauseSelection, HeldOutPairsAppearInBothOrders) {
  const auto ds = gen(TaskId::cause_selection);
  ASSERT_EQ(ds.execute.size() % 2, 0u);
  for (std::size_t i = 0; i < ds.execute.size(); i += 2) {
    EXPECT_EQ(ds.execute[i].first_gold(), ds.execute[i + 1].first_gold());
    EXPECT_EQ(ds.execute[i].aux.at("cause_position"), "1");
    EXPECT_EQ(ds.execute[i + 1].aux.at("cause_position"), "2");
  }
}

TEST(Sampling, FiveDistinctDemosFromInduceOnly) {
  const auto ds = gen(TaskId::pluralization);
  const auto held = inputs_of(ds.execute);
  const auto examples = sample_induction_examples(ds, 50, 3);
  ASSERT_EQ(examples.size(), 50u);
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const auto& ex = examples[k];
    ASSERT_EQ(ex.demos.size(), 5u);
    EXPECT_EQ(inputs_of(ex.demos).size(), 5u);
    for (const auto& d : ex.demos) EXPECT_FALSE(held.count(d.input));
    EXPECT_EQ(ex.seed_path, "seed=3/task=pluralization/example=" + std::to_string(k));
  }
}

TEST(Sampling, LabelBalancedTasks) {
  for (auto t : {TaskId::sentiment, TaskId::word_in_context}) {
    const auto ds = gen(t);
    for (const auto& ex : sample_induction_examples(ds, 100, 5)) {
      std::map<std::string, int> counts;
      for (const auto& d : ex.demos) ++counts[d.first_gold()];
      ASSERT_EQ(counts.size(), 2u) << task_name(t);
      for (const auto& [label, n] : counts) EXPECT_GE(n, 2) << task_name(t) << " " << label;
    }
  }
}

TEST(Sampling, SimilarityIncludesBothExtremes) {
  const auto ds = gen(TaskId::sentence_similarity);
  for (const auto& ex : sample_induction_examples(ds, 100, 5)) {
    std::multiset<std::string> scores;
    for (const auto& d : ex.demos) scores.insert(d.aux.at("score"));
    EXPECT_GE(scores.count("0"), 1u);
    EXPECT_GE(scores.count("5"), 1u);
    EXPECT_EQ(inputs_of(ex.demos).size(), 5u);
  }
}

TEST(Sampling, ImpossibleBalanceIsADataError) {
  TaskDataset ds;
  ds.task = TaskId::sentiment;
  for (int i = 0; i < 10; ++i) ds.induce.push_back(demo("good " + std::to_string(i), "positive"));
  try {
    sample_induction_examples(ds, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::data);
  }
}

TEST(Sampling, ZeroExamplesIsAUsageError) {
  try {
    sample_induction_examples(gen(TaskId::sum), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::usage);
  }
}

TEST(Sampling, SameSeedSameDemos) {
  const auto ds = gen(TaskId::antonyms);
  const auto a = sample_induction_examples(ds, 20, 9);
  const auto b = sample_induction_examples(ds, 20, 9);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].demos, b[i].demos);
}

TEST(Jsonl, RoundTripsEveryTask) {
  TempDir dir;
  for (auto t : kAllTasks) {
    const auto ds = gen(t);
    const auto path = dir / (std::string(task_name(t)) + ".jsonl");
    export_dataset(ds, path);
    EXPECT_EQ(import_dataset(path), ds) << task_name(t);
  }
}

TEST(Jsonl, EmptyOutputReportsLine) {
  const std::string text =
      R"({"task":"sum","split":"induce","input":"1 2","gold":["3"],"aux":{}})"
      "\n"
      R"({"task":"sum","split":"induce","input":"1 3","gold":[""],"aux":{}})"
      "\n";
  try {
    dataset_from_jsonl(text, "sum.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::data);
    EXPECT_NE(std::string(e.what()).find("sum.jsonl:2"), std::string::npos) << e.what();
  }
}

TEST(Jsonl, FixtureDatasetsMatchCommittedDigests) {
  std::map<std::string, std::string> digests;
  for (const auto& line : lines_of(read_file(testsupport::golden() / "datasets.sha256"))) {
    const auto parts = split_ws(line);
    if (parts.size() == 2) digests[parts[1]] = parts[0];
  }
  ASSERT_EQ(digests.size(), 3u);
  for (auto t : {TaskId::membership, TaskId::pluralization, TaskId::rhymes}) {
    const std::string file = std::string(task_name(t)) + ".jsonl";
    const auto text = dataset_to_jsonl(gen(t, 7));
    EXPECT_EQ(sha256_hex(text), digests.at(file)) << file;
    EXPECT_EQ(text, read_file(testsupport::golden() / file)) << file;
  }
}

TEST(Helpers, ConceptMarkerAndScoreRounding) {
  EXPECT_EQ(detail::strip_concept_marker("They all involve oscillations"), "involve oscillations");
  EXPECT_EQ(detail::strip_concept_marker("oscillations"), "oscillations");
  EXPECT_EQ(detail::round_score(2.5), 3);
  EXPECT_EQ(detail::round_score(2.49), 2);
  EXPECT_EQ(detail::round_score(5.2), 5);
  EXPECT_EQ(similarity_label(0), "0 - definitely not");
  EXPECT_EQ(similarity_label(5), "5 - perfectly");
}
