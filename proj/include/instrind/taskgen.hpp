#ifndef INSTRIND_TASKGEN_HPP
#define INSTRIND_TASKGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/corpus.hpp"
#include "instrind/number_words.hpp"
#include "instrind/pluralize.hpp"
#include "instrind/types.hpp"

namespace instrind::taskgen {

using nlohmann::json;
using corpus::SourceFormat;
using corpus::SourceManifest;
namespace src = corpus::source;

inline constexpr std::size_t kDefaultExecuteSize = 100;
inline constexpr std::size_t kDemosPerExample = 5;

/// Similarity descriptors indexed by the rounded score.
inline constexpr std::array<std::string_view, 6> kSimilarityDescriptors = {
    "definitely not", "probably not", "possibly", "probably", "almost perfectly", "perfectly",
};

inline std::string similarity_label(int score) {
  return std::to_string(score) + " - " + std::string(kSimilarityDescriptors.at(static_cast<std::size_t>(score)));
}

/// Sources each generator reads; all are digest-checked before parsing.
inline std::vector<std::string> declared_sources(TaskId t) {
  switch (t) {
    case TaskId::first_letter:
    case TaskId::second_letter:
    case TaskId::list_letters: return {src::freq, src::nouns};
    case TaskId::starting_with: return {src::cola};
    case TaskId::pluralization: return {src::freq, src::nouns, src::mass_nouns};
    case TaskId::passivization: return {src::hans};
    case TaskId::negation: return {src::lama};
    case TaskId::antonyms: return {src::antonyms, src::wordnet_antonyms};
    case TaskId::synonyms: return {src::synonyms};
    case TaskId::membership: return {src::lexicon};
    case TaskId::rhymes: return {src::lexicon, src::cmudict};
    case TaskId::larger_animal: return {src::comparison};
    case TaskId::cause_selection: return {src::cause_effect};
    case TaskId::common_concept: return {src::novel_concepts};
    case TaskId::formality: return {src::formality};
    case TaskId::sum:
    case TaskId::diff:
    case TaskId::num_to_word: return {};
    case TaskId::translation_de: return {src::freq, src::nouns, src::wiktionary_de};
    case TaskId::translation_es: return {src::freq, src::nouns, src::wiktionary_es};
    case TaskId::translation_fr: return {src::freq, src::nouns, src::wiktionary_fr};
    case TaskId::sentiment: return {src::sst};
    case TaskId::sentence_similarity: return {src::stsb};
    case TaskId::word_in_context: return {src::wic};
  }
  return {};
}

inline std::size_t word_count(std::string_view s) { return split_ws(trim_view(s)).size(); }

inline Demonstration demo(std::string input, std::string gold) {
  Demonstration d;
  d.input = std::move(input);
  d.gold.push_back(std::move(gold));
  return d;
}

namespace detail {

/// Merges demonstrations that share an input (gold sets are unioned),
/// preserving first-appearance order.
inline std::vector<Demonstration> merge_by_input(std::vector<Demonstration> pool) {
  std::vector<Demonstration> out;
  std::map<std::string, std::size_t> at;
  for (auto& d : pool) {
    auto it = at.find(d.input);
    if (it == at.end()) {
      at.emplace(d.input, out.size());
      out.push_back(std::move(d));
    } else {
      for (auto& g : d.gold) out[it->second].add_gold(std::move(g));
    }
  }
  return out;
}

/// First occurrence wins; later duplicates (possibly with other labels) are dropped.
inline std::vector<Demonstration> first_by_input(std::vector<Demonstration> pool) {
  std::vector<Demonstration> out;
  std::unordered_set<std::string> seen;
  for (auto& d : pool) {
    if (seen.insert(d.input).second) out.push_back(std::move(d));
  }
  return out;
}

/// Held-out size for single-pool tasks: the target, capped at half the
/// pool so that small fixture corpora still leave an induce set.
inline std::size_t execute_size(std::size_t pool, std::size_t target = kDefaultExecuteSize) {
  return std::min(target, pool / 2);
}

inline void split_pool(TaskDataset& ds, std::vector<Demonstration> pool, Rng& rng,
                       std::size_t target = kDefaultExecuteSize) {
  pool = merge_by_input(std::move(pool));
  rng.shuffle(pool);
  const std::size_t n_exec = execute_size(pool.size(), target);
  ds.execute.assign(std::make_move_iterator(pool.begin()),
                    std::make_move_iterator(pool.begin() + static_cast<std::ptrdiff_t>(n_exec)));
  ds.induce.assign(std::make_move_iterator(pool.begin() + static_cast<std::ptrdiff_t>(n_exec)),
                   std::make_move_iterator(pool.end()));
}

template <typename T>
std::vector<T> sample(const std::vector<T>& pool, std::size_t k, Rng& rng) {
  std::vector<T> out;
  for (auto i : rng.sample_indices(pool.size(), k)) out.push_back(pool[i]);
  return out;
}

inline std::string str_field(const json& row, const char* key, std::string_view source) {
  if (!row.contains(key) || !row[key].is_string()) {
    fail(ErrorCategory::data, "source '" + std::string(source) + "': record lacks string field '" + key + "'");
  }
  return row[key].get<std::string>();
}

inline std::vector<json> jsonl(const SourceManifest& m, const std::string& id) {
  return corpus::jsonl_rows(m.read_verified(id, SourceFormat::labeled_jsonl), id);
}

inline std::vector<std::pair<std::string, std::string>> pairs(const SourceManifest& m, const std::string& id) {
  return corpus::parse_pairs(m.read_verified(id, SourceFormat::pair_tsv), id);
}

inline std::string strip_token(std::string_view tok) {
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0, e = tok.size();
  while (b < e && !alnum(tok[b])) ++b;
  while (e > b && !alnum(tok[e - 1])) --e;
  return std::string(tok.substr(b, e - b));
}

/// Words of `sentence` starting with `letter` (case-insensitive), in order,
/// deduplicated case-insensitively.
inline std::vector<std::string> words_starting_with(std::string_view sentence, char letter) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& raw : split_ws(sentence)) {
    auto w = strip_token(raw);
    if (w.empty()) continue;
    if (std::tolower(static_cast<unsigned char>(w[0])) != letter) continue;
    if (seen.insert(to_lower(w)).second) out.push_back(w);
  }
  return out;
}

inline std::vector<Demonstration> starting_with_pairs(const std::vector<std::string>& sentences) {
  std::vector<Demonstration> out;
  for (const auto& s : sentences) {
    for (char c = 'a'; c <= 'z'; ++c) {
      auto words = words_starting_with(s, c);
      if (words.empty()) continue;
      out.push_back(demo(s + " [" + std::string(1, c) + "]", join(words, ", ")));
    }
  }
  return out;
}

inline std::string two_sentences(std::string_view a, std::string_view b) {
  return "Sentence 1: " + std::string(a) + " Sentence 2: " + std::string(b);
}

inline constexpr std::array<std::string_view, 8> kConceptMarkers = {
    "they all are ", "they are all ", "they all ", "all of them are ", "all of them ",
    "each of them ", "both are ", "all are ",
};

/// Drops a leading "They all ..." style marker from a concept answer.
inline std::string strip_concept_marker(std::string_view answer) {
  std::string a = trim(answer);
  const std::string lower = to_lower(a);
  for (auto m : kConceptMarkers) {
    if (lower.rfind(m, 0) == 0) return a.substr(m.size());
  }
  return a;
}

inline int round_score(double score) {
  const int r = static_cast<int>(std::floor(score + 0.5));
  return std::clamp(r, 0, 5);
}

// ------------------------------------------------------------ generators

inline void gen_letters(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> pool;
  for (const auto& w : corpus::load_cen(m)) {
    switch (ds.task) {
      case TaskId::first_letter: pool.push_back(demo(w, w.substr(0, 1))); break;
      case TaskId::second_letter:
        if (w.size() >= 2) pool.push_back(demo(w, w.substr(1, 1)));
        break;
      default: {
        std::vector<std::string> letters;
        for (char c : w) letters.emplace_back(1, c);
        pool.push_back(demo(w, join(letters, " ")));
      }
    }
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_starting_with(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<std::string> train, in_dev, out_dev;
  for (const auto& row : jsonl(m, src::cola)) {
    const auto split = str_field(row, "split", src::cola);
    auto s = trim(str_field(row, "sentence", src::cola));
    if (split == "train") train.push_back(std::move(s));
    else if (split == "in_domain_dev") in_dev.push_back(std::move(s));
    else if (split == "out_of_domain_dev") out_dev.push_back(std::move(s));
    else fail(ErrorCategory::data, "source 'cola': unknown split '" + split + "'");
  }
  auto train_pairs = first_by_input(starting_with_pairs(train));
  ds.induce = sample(train_pairs, 3000, rng);
  auto in_pairs = first_by_input(starting_with_pairs(in_dev));
  auto out_pairs = first_by_input(starting_with_pairs(out_dev));
  ds.execute = sample(in_pairs, 50, rng);
  for (auto& d : sample(out_pairs, 50, rng)) ds.execute.push_back(std::move(d));
}

inline void gen_pluralization(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> pool;
  for (const auto& p : corpus::load_plural_pairs(m)) pool.push_back(demo(p.singular, p.plural));
  split_pool(ds, std::move(pool), rng);
}

inline void gen_pairs_task(TaskDataset& ds, const SourceManifest& m, const std::string& id, Rng& rng,
                           std::size_t cap = SIZE_MAX) {
  std::vector<Demonstration> pool;
  for (const auto& [a, b] : pairs(m, id)) {
    if (pool.size() >= cap) break;
    pool.push_back(demo(a, b));
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_negation(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  static const std::vector<std::pair<std::string, std::size_t>> quotas = {
      {"squad", 304}, {"conceptnet", 300}, {"trex", 200}, {"googlere_birth", 100}, {"googlere_death", 100},
  };
  std::map<std::string, std::vector<Demonstration>> by_subset;
  for (const auto& row : jsonl(m, src::lama)) {
    const auto subset = str_field(row, "subset", src::lama);
    const bool known = std::any_of(quotas.begin(), quotas.end(), [&](const auto& q) { return q.first == subset; });
    if (!known) fail(ErrorCategory::data, "source 'negated_lama': unknown subset '" + subset + "'");
    by_subset[subset].push_back(demo(str_field(row, "input", src::lama), str_field(row, "output", src::lama)));
  }
  std::vector<Demonstration> pool;
  for (const auto& [name, quota] : quotas) {
    const auto& rows = by_subset[name];
    if (rows.size() <= quota) {
      pool.insert(pool.end(), rows.begin(), rows.end());
    } else {
      for (auto& d : sample(rows, quota, rng)) pool.push_back(std::move(d));
    }
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_antonyms(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::set<std::pair<std::string, std::string>> wordnet;
  for (const auto& [a, b] : pairs(m, src::wordnet_antonyms)) {
    wordnet.emplace(to_lower(a), to_lower(b));
    wordnet.emplace(to_lower(b), to_lower(a));
  }
  std::vector<Demonstration> pool;
  for (const auto& [a, b] : pairs(m, src::antonyms)) {
    if (wordnet.count({to_lower(a), to_lower(b)})) pool.push_back(demo(a, b));
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_membership(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  const auto lex = corpus::load_lexicon(m);
  static const std::array<std::string_view, 5> others = {"clothing", "colors", "food", "vehicles", "professions"};
  struct Split {
    std::vector<std::string> induce, execute;
  };
  auto split_words = [&](std::string_view cat) {
    auto words = lex.words_in(cat);
    if (words.size() < 2) fail(ErrorCategory::data, "lexicon: category '" + std::string(cat) + "' needs at least 2 words");
    rng.shuffle(words);
    const std::size_t held = std::max<std::size_t>(1, words.size() / 5);
    Split s;
    s.execute.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(held));
    s.induce.assign(words.begin() + static_cast<std::ptrdiff_t>(held), words.end());
    return s;
  };
  const Split animals = split_words("animals");
  std::map<std::string_view, Split> other;
  for (auto c : others) other.emplace(c, split_words(c));

  auto make = [&](bool held_out, std::size_t target) {
    const auto& a_pool = held_out ? animals.execute : animals.induce;
    std::vector<Demonstration> out;
    std::unordered_set<std::string> seen;
    const std::size_t max_attempts = target * 50;
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < target; ++attempt) {
      const std::size_t n_animals = std::min<std::size_t>(3 + rng.below(2), a_pool.size());
      const auto& cat = others[rng.below(others.size())];
      const auto& o_pool = held_out ? other.at(cat).execute : other.at(cat).induce;
      const std::size_t lo = std::max<std::size_t>(1, 5 > n_animals ? 5 - n_animals : 1);
      const std::size_t hi = std::min<std::size_t>(7 - n_animals, o_pool.size());
      if (n_animals < 3 || hi < lo) continue;
      const std::size_t n_other = lo + rng.below(hi - lo + 1);
      std::vector<std::pair<std::string, bool>> items;
      for (auto i : rng.sample_indices(a_pool.size(), n_animals)) items.emplace_back(a_pool[i], true);
      for (auto i : rng.sample_indices(o_pool.size(), n_other)) items.emplace_back(o_pool[i], false);
      rng.shuffle(items);
      std::vector<std::string> words, gold;
      for (const auto& [w, is_animal] : items) {
        words.push_back(w);
        if (is_animal) gold.push_back(w);
      }
      auto input = join(words, ", ");
      if (!seen.insert(input).second) continue;
      out.push_back(demo(std::move(input), join(gold, ", ")));
    }
    return out;
  };
  ds.induce = make(false, 3000);
  ds.execute = make(true, kDefaultExecuteSize);
}

inline void gen_rhymes(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  const auto groups = corpus::load_rhyme_groups(m);
  if (groups.groups.size() < 2) fail(ErrorCategory::data, "rhymes: need at least two rhyme groups");
  std::vector<std::size_t> order(groups.groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  const std::size_t n_exec_groups = std::min<std::size_t>(30, order.size() / 2);

  auto demo_for = [&](const std::string& w, std::size_t gid) {
    Demonstration d;
    d.input = w;
    for (const auto& other : groups.groups[gid].words) {
      if (other != w) d.gold.push_back(other);
    }
    d.aux["rhyme_group"] = std::to_string(gid);
    return d;
  };

  std::vector<Demonstration> exec_pool;
  for (std::size_t i = 0; i < n_exec_groups; ++i) {
    for (const auto& w : groups.groups[order[i]].words) exec_pool.push_back(demo_for(w, order[i]));
  }
  ds.execute = sample(exec_pool, kDefaultExecuteSize, rng);
  for (std::size_t i = n_exec_groups; i < order.size(); ++i) {
    for (const auto& w : groups.groups[order[i]].words) ds.induce.push_back(demo_for(w, order[i]));
  }
}

inline void gen_larger_animal(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  struct Cmp {
    std::string a, b, larger;
  };
  std::vector<Cmp> rows;
  std::set<std::string> animals;
  for (const auto& row : jsonl(m, src::comparison)) {
    Cmp c{str_field(row, "a", src::comparison), str_field(row, "b", src::comparison),
          str_field(row, "larger", src::comparison)};
    if (c.larger != c.a && c.larger != c.b) {
      fail(ErrorCategory::data, "source 'olmpics_comparison': larger '" + c.larger + "' is neither animal");
    }
    animals.insert(c.a);
    animals.insert(c.b);
    rows.push_back(std::move(c));
  }
  std::vector<std::string> order(animals.begin(), animals.end());
  rng.shuffle(order);
  const std::size_t held = order.size() / 5;
  const std::set<std::string> held_out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(held));
  std::vector<Demonstration> exec_pool;
  for (const auto& c : rows) {
    const bool ha = held_out.count(c.a) != 0, hb = held_out.count(c.b) != 0;
    auto d = demo(c.a + ", " + c.b, c.larger);
    if (!ha && !hb) ds.induce.push_back(std::move(d));
    else if (ha && hb) exec_pool.push_back(std::move(d));
  }
  ds.induce = first_by_input(std::move(ds.induce));
  ds.execute = sample(first_by_input(std::move(exec_pool)), kDefaultExecuteSize, rng);
}

inline void gen_cause_selection(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& row : jsonl(m, src::cause_effect)) {
    items.emplace_back(str_field(row, "cause", src::cause_effect), str_field(row, "effect", src::cause_effect));
  }
  rng.shuffle(items);
  const std::size_t half = items.size() / 2;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [cause, effect] = items[i];
    if (i < half) {
      const bool cause_first = rng.coin();
      auto d = demo(cause_first ? two_sentences(cause, effect) : two_sentences(effect, cause), cause);
      d.aux["cause_position"] = cause_first ? "1" : "2";
      ds.induce.push_back(std::move(d));
    } else {
      auto d1 = demo(two_sentences(cause, effect), cause);
      d1.aux["cause_position"] = "1";
      auto d2 = demo(two_sentences(effect, cause), cause);
      d2.aux["cause_position"] = "2";
      ds.execute.push_back(std::move(d1));
      ds.execute.push_back(std::move(d2));
    }
  }
}

inline void gen_common_concept(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> items;
  for (const auto& row : jsonl(m, src::novel_concepts)) {
    items.push_back(demo(str_field(row, "input", src::novel_concepts),
                         strip_concept_marker(str_field(row, "target", src::novel_concepts))));
  }
  rng.shuffle(items);
  const std::size_t half = items.size() / 2;
  ds.induce.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(half));
  ds.execute.assign(items.begin() + static_cast<std::ptrdiff_t>(half), items.end());
}

inline void gen_formality(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> items;
  for (const auto& [a, b] : pairs(m, src::formality)) items.push_back(demo(a, b));
  items = first_by_input(std::move(items));
  rng.shuffle(items);
  const std::size_t half = items.size() / 2;
  ds.induce.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(half));
  ds.execute.assign(items.begin() + static_cast<std::ptrdiff_t>(half), items.end());
}

inline void gen_arithmetic(TaskDataset& ds, Rng& rng) {
  std::vector<Demonstration> pool;
  if (ds.task == TaskId::sum) {
    for (int a = 0; a <= 99; ++a)
      for (int b = 0; b <= 99; ++b)
        pool.push_back(demo(std::to_string(a) + " " + std::to_string(b), std::to_string(a + b)));
  } else if (ds.task == TaskId::diff) {
    // (larger, smaller) ordering: the second number is always subtracted
    for (int a = 0; a <= 198; ++a)
      for (int b = 0; b <= a; ++b)
        pool.push_back(demo(std::to_string(a) + " " + std::to_string(b), std::to_string(a - b)));
  } else {
    for (std::uint32_t n = 0; n <= 9999; ++n) pool.push_back(demo(std::to_string(n), number_to_words(n)));
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_translation(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  const std::string lang = std::string(task_name(ds.task)).substr(std::string("translation_").size());
  const std::string id = "wiktionary_" + lang;
  corpus::TranslationLexicon lex;
  lex.add_language(lang, pairs(m, id));
  std::vector<Demonstration> pool;
  for (const auto& w : corpus::load_cen(m)) {
    const auto* trs = lex.find(w, lang);
    if (!trs) continue;
    Demonstration d;
    d.input = w;
    for (const auto& t : *trs) d.add_gold(t);
    pool.push_back(std::move(d));
  }
  split_pool(ds, std::move(pool), rng);
}

inline void gen_sentiment(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> train, dev;
  for (const auto& row : jsonl(m, src::sst)) {
    if (row.contains("full_sentence") && !row["full_sentence"].get<bool>()) continue;
    const auto sentence = trim(str_field(row, "sentence", src::sst));
    if (word_count(sentence) > 10 || sentence.empty()) continue;
    if (!row.contains("label") || !row["label"].is_number_integer()) {
      fail(ErrorCategory::data, "source 'sst': record lacks integer 'label'");
    }
    auto d = demo(sentence, row["label"].get<int>() == 1 ? "positive" : "negative");
    const auto split = str_field(row, "split", src::sst);
    (split == "train" ? train : dev).push_back(std::move(d));
  }
  ds.induce = first_by_input(std::move(train));
  ds.execute = sample(first_by_input(std::move(dev)), kDefaultExecuteSize, rng);
}

inline void gen_similarity(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> train, dev;
  for (const auto& row : jsonl(m, src::stsb)) {
    const auto s1 = trim(str_field(row, "sentence1", src::stsb));
    const auto s2 = trim(str_field(row, "sentence2", src::stsb));
    if (word_count(s1) > 10 || word_count(s2) > 10) continue;
    if (!row.contains("score") || !row["score"].is_number()) fail(ErrorCategory::data, "source 'stsb': record lacks numeric 'score'");
    const int score = round_score(row["score"].get<double>());
    auto d = demo(two_sentences(s1, s2), similarity_label(score));
    d.aux["score"] = std::to_string(score);
    (str_field(row, "split", src::stsb) == "train" ? train : dev).push_back(std::move(d));
  }
  ds.induce = first_by_input(std::move(train));
  ds.execute = sample(first_by_input(std::move(dev)), kDefaultExecuteSize, rng);
}

inline void gen_wic(TaskDataset& ds, const SourceManifest& m, Rng& rng) {
  std::vector<Demonstration> train, dev;
  for (const auto& row : jsonl(m, src::wic)) {
    const auto s1 = trim(str_field(row, "sentence1", src::wic));
    const auto s2 = trim(str_field(row, "sentence2", src::wic));
    if (word_count(s1) > 10 || word_count(s2) > 10) continue;
    if (!row.contains("label") || !row["label"].is_boolean()) fail(ErrorCategory::data, "source 'wic': record lacks boolean 'label'");
    auto d = demo(two_sentences(s1, s2) + " Word: " + str_field(row, "word", src::wic),
                  row["label"].get<bool>() ? "same" : "not the same");
    (str_field(row, "split", src::wic) == "train" ? train : dev).push_back(std::move(d));
  }
  ds.induce = first_by_input(std::move(train));
  ds.execute = sample(first_by_input(std::move(dev)), kDefaultExecuteSize, rng);
}

/// Removes induce items whose input also occurs in execute, then validates.
inline void finalize(TaskDataset& ds) {
  std::unordered_set<std::string> held;
  for (const auto& d : ds.execute) held.insert(d.input);
  std::erase_if(ds.induce, [&](const Demonstration& d) { return held.count(d.input) != 0; });
  for (const auto& d : ds.induce) validate(d);
  for (const auto& d : ds.execute) validate(d);
}

}  // namespace detail

/// Builds a task's induce/execute splits. Deterministic in (task, source
/// bytes, seed); every declared source is digest-checked up front.
inline TaskDataset generate_task(TaskId task, const SourceManifest& manifest, std::uint64_t seed) {
  manifest.verify(declared_sources(task));
  TaskDataset ds;
  ds.task = task;
  ds.seed = seed;
  Rng rng(derive_seed(seed, "generate/" + std::string(task_name(task))));
  using namespace detail;
  switch (task) {
    case TaskId::first_letter:
    case TaskId::second_letter:
    case TaskId::list_letters: gen_letters(ds, manifest, rng); break;
    case TaskId::starting_with: gen_starting_with(ds, manifest, rng); break;
    case TaskId::pluralization: gen_pluralization(ds, manifest, rng); break;
    case TaskId::passivization: gen_pairs_task(ds, manifest, src::hans, rng, 1000); break;
    case TaskId::negation: gen_negation(ds, manifest, rng); break;
    case TaskId::antonyms: gen_antonyms(ds, manifest, rng); break;
    case TaskId::synonyms: gen_pairs_task(ds, manifest, src::synonyms, rng); break;
    case TaskId::membership: gen_membership(ds, manifest, rng); break;
    case TaskId::rhymes: gen_rhymes(ds, manifest, rng); break;
    case TaskId::larger_animal: gen_larger_animal(ds, manifest, rng); break;
    case TaskId::cause_selection: gen_cause_selection(ds, manifest, rng); break;
    case TaskId::common_concept: gen_common_concept(ds, manifest, rng); break;
    case TaskId::formality: gen_formality(ds, manifest, rng); break;
    case TaskId::sum:
    case TaskId::diff:
    case TaskId::num_to_word: gen_arithmetic(ds, rng); break;
    case TaskId::translation_de:
    case TaskId::translation_es:
    case TaskId::translation_fr: gen_translation(ds, manifest, rng); break;
    case TaskId::sentiment: gen_sentiment(ds, manifest, rng); break;
    case TaskId::sentence_similarity: gen_similarity(ds, manifest, rng); break;
    case TaskId::word_in_context: gen_wic(ds, manifest, rng); break;
  }
  finalize(ds);
  return ds;
}

// ================================================================ sampling

inline std::vector<InductionExample> sample_induction_examples(const TaskDataset& ds, std::size_t n,
                                                               std::uint64_t seed) {
  if (n < 1) fail(ErrorCategory::usage, "sample_induction_examples: n must be >= 1");
  const auto& pool = ds.induce;
  if (pool.size() < kDemosPerExample) {
    fail(ErrorCategory::data, std::string(task_name(ds.task)) + ": induce set has " + std::to_string(pool.size()) +
                                  " demonstrations, need at least 5");
  }
  const auto constraint = constraint_for(ds.task);
  Rng rng(derive_seed(seed, "induction/" + std::string(task_name(ds.task))));

  // label -> indices, for the balanced policies
  std::map<std::string, std::vector<std::size_t>> by_label;
  std::vector<std::size_t> zeros, fives;
  if (constraint == SamplingConstraint::two_per_label) {
    for (std::size_t i = 0; i < pool.size(); ++i) by_label[pool[i].first_gold()].push_back(i);
    if (by_label.size() != 2 || by_label.begin()->second.size() < 2 || by_label.rbegin()->second.size() < 2) {
      fail(ErrorCategory::data, std::string(task_name(ds.task)) +
                                    ": cannot sample >= 2 demonstrations per label from the induce set");
    }
  } else if (constraint == SamplingConstraint::score_extremes) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto it = pool[i].aux.find("score");
      if (it == pool[i].aux.end()) continue;
      if (it->second == "0") zeros.push_back(i);
      if (it->second == "5") fives.push_back(i);
    }
    if (zeros.empty() || fives.empty()) {
      fail(ErrorCategory::data, std::string(task_name(ds.task)) + ": induce set lacks a score-0 or score-5 pair");
    }
  }

  std::vector<InductionExample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> picked;
    switch (constraint) {
      case SamplingConstraint::none: picked = rng.sample_indices(pool.size(), kDemosPerExample); break;
      case SamplingConstraint::two_per_label: {
        const auto& a = by_label.begin()->second;
        const auto& b = by_label.rbegin()->second;
        std::size_t n_a = 2 + rng.below(2);
        if (n_a > a.size()) n_a = 2;
        if (kDemosPerExample - n_a > b.size()) n_a = 3;
        for (auto i : rng.sample_indices(a.size(), n_a)) picked.push_back(a[i]);
        for (auto i : rng.sample_indices(b.size(), kDemosPerExample - n_a)) picked.push_back(b[i]);
        rng.shuffle(picked);
        break;
      }
      case SamplingConstraint::score_extremes: {
        picked.push_back(zeros[rng.below(zeros.size())]);
        picked.push_back(fives[rng.below(fives.size())]);
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (i != picked[0] && i != picked[1]) rest.push_back(i);
        }
        for (auto i : rng.sample_indices(rest.size(), 3)) picked.push_back(rest[i]);
        rng.shuffle(picked);
        break;
      }
    }
    InductionExample ex;
    ex.task = ds.task;
    for (auto i : picked) ex.demos.push_back(pool[i]);
    ex.seed_path = "seed=" + std::to_string(seed) + "/task=" + std::string(task_name(ds.task)) +
                   "/example=" + std::to_string(k);
    out.push_back(std::move(ex));
  }
  return out;
}

// ================================================================ JSONL

inline json demo_to_json(TaskId task, std::string_view split, const Demonstration& d, std::uint64_t seed) {
  return json{{"task", task_name(task)}, {"split", split}, {"input", d.input},
              {"gold", d.gold},          {"aux", d.aux},   {"seed", seed}};
}

inline std::string dataset_to_jsonl(const TaskDataset& ds) {
  std::string out;
  for (const auto& d : ds.induce) out += demo_to_json(ds.task, "induce", d, ds.seed).dump() + "\n";
  for (const auto& d : ds.execute) out += demo_to_json(ds.task, "execute", d, ds.seed).dump() + "\n";
  return out;
}

inline TaskDataset dataset_from_jsonl(std::string_view text, std::string_view origin = "dataset") {
  TaskDataset ds;
  bool have_task = false;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno) + ": ";
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, where + "malformed JSON (" + e.what() + ")");
    }
    try {
      const auto task = find_task(row.at("task").get<std::string>());
      if (!task) fail(ErrorCategory::data, where + "unknown task '" + row.at("task").get<std::string>() + "'");
      if (have_task && *task != ds.task) fail(ErrorCategory::data, where + "mixed tasks in one dataset file");
      ds.task = *task;
      have_task = true;
      if (row.contains("seed")) ds.seed = row["seed"].get<std::uint64_t>();
      Demonstration d;
      d.input = row.at("input").get<std::string>();
      d.gold = row.at("gold").get<std::vector<std::string>>();
      if (row.contains("aux")) d.aux = row["aux"].get<std::map<std::string, std::string>>();
      try {
        validate(d);
      } catch (const Error& e) {
        fail(ErrorCategory::data, where + e.what());
      }
      const auto split = row.at("split").get<std::string>();
      if (split == "induce") ds.induce.push_back(std::move(d));
      else if (split == "execute") ds.execute.push_back(std::move(d));
      else fail(ErrorCategory::data, where + "unknown split '" + split + "'");
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, where + "bad record (" + e.what() + ")");
    }
  }
  if (!have_task) fail(ErrorCategory::data, std::string(origin) + ": empty dataset file");
  return ds;
}

inline void export_dataset(const TaskDataset& ds, const std::filesystem::path& path) {
  write_file(path, dataset_to_jsonl(ds));
}

inline TaskDataset import_dataset(const std::filesystem::path& path) {
  return dataset_from_jsonl(read_file(path), path.string());
}

}  // namespace instrind::taskgen

#endif  // INSTRIND_TASKGEN_HPP
