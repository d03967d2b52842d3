#ifndef INSTRIND_CORPUS_HPP
#define INSTRIND_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/pluralize.hpp"

namespace instrind::corpus {

using nlohmann::json;

// ================================================================ manifest

enum class SourceFormat { tsv_lexicon, freq_table, pron_dict, pair_tsv, labeled_jsonl };

inline std::string_view format_name(SourceFormat f) {
  switch (f) {
    case SourceFormat::tsv_lexicon: return "tsv-lexicon";
    case SourceFormat::freq_table: return "freq-table";
    case SourceFormat::pron_dict: return "pron-dict";
    case SourceFormat::pair_tsv: return "pair-tsv";
    case SourceFormat::labeled_jsonl: return "labeled-jsonl";
  }
  return "?";
}

inline SourceFormat parse_format(std::string_view s) {
  for (auto f : {SourceFormat::tsv_lexicon, SourceFormat::freq_table, SourceFormat::pron_dict,
                 SourceFormat::pair_tsv, SourceFormat::labeled_jsonl}) {
    if (format_name(f) == s) return f;
  }
  fail(ErrorCategory::data, "unknown source format '" + std::string(s) + "'");
}

struct SourceEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string sha256;
  SourceFormat format{};
};

/// Pins every external artifact by path and SHA-256. Reads go through
/// read_verified(), so no generator ever sees unverified bytes.
class SourceManifest {
 public:
  SourceManifest() = default;

  static SourceManifest load(const std::filesystem::path& manifest_path) {
    json doc;
    try {
      doc = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, "manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!doc.contains("entries") || !doc["entries"].is_object()) {
      fail(ErrorCategory::data, "manifest " + manifest_path.string() + ": missing 'entries' object");
    }
    SourceManifest m;
    const auto base = manifest_path.parent_path();
    for (const auto& [id, e] : doc["entries"].items()) {
      if (!e.contains("path") || !e.contains("sha256") || !e.contains("format")) {
        fail(ErrorCategory::data, "manifest entry '" + id + "' needs path, sha256 and format");
      }
      SourceEntry entry;
      const std::filesystem::path p = e["path"].get<std::string>();
      entry.path = p.is_absolute() ? p : base / p;
      entry.sha256 = to_lower(e["sha256"].get<std::string>());
      entry.format = parse_format(e["format"].get<std::string>());
      m.entries_.emplace(id, std::move(entry));
    }
    return m;
  }

  void add(std::string id, SourceEntry entry) { entries_[std::move(id)] = std::move(entry); }

  const std::map<std::string, SourceEntry>& entries() const { return entries_; }

  bool has(const std::string& id) const { return entries_.count(id) != 0; }

  const SourceEntry& resolve(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
      fail(ErrorCategory::missing_source, "source '" + id + "' is not declared in the manifest");
    }
    return it->second;
  }

  /// File bytes after the digest check. Throws missing_source when the file
  /// is absent and digest_mismatch naming the source on a bad digest.
  std::string read_verified(const std::string& id, std::optional<SourceFormat> expected = {}) const {
    const SourceEntry& e = resolve(id);
    if (expected && e.format != *expected) {
      fail(ErrorCategory::data, "source '" + id + "' has format " + std::string(format_name(e.format)) +
                                    ", expected " + std::string(format_name(*expected)));
    }
    if (!std::filesystem::exists(e.path)) {
      fail(ErrorCategory::missing_source, "source '" + id + "' not found at " + e.path.string());
    }
    std::string bytes = read_file(e.path);
    const std::string got = sha256_hex(bytes);
    if (got != e.sha256) {
      fail(ErrorCategory::digest_mismatch,
           "source '" + id + "' digest mismatch: expected " + e.sha256 + ", got " + got);
    }
    return bytes;
  }

  /// Digest-checks every listed source before any of them is parsed.
  void verify(const std::vector<std::string>& ids) const {
    for (const auto& id : ids) (void)read_verified(id);
  }

 private:
  std::map<std::string, SourceEntry> entries_;
};

// ================================================================ parsing

/// Non-comment, non-blank lines split on tabs.
inline std::vector<std::vector<std::string>> tsv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : lines_of(text)) {
    if (trim_view(line).empty() || line.front() == '#') continue;
    rows.push_back(split(line, '\t'));
  }
  return rows;
}

inline std::vector<json> jsonl_rows(std::string_view text, std::string_view what) {
  std::vector<json> out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, std::string(what) + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

class FrequencyTable {
 public:
  FrequencyTable() = default;

  explicit FrequencyTable(std::vector<std::pair<std::string, std::uint64_t>> rows)
      : rows_(std::move(rows)) {
    // rank order: count descending, ties by word
    std::stable_sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [w, c] : rows_) counts_.emplace(w, c);
  }

  static FrequencyTable parse(std::string_view text) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    std::size_t lineno = 0;
    for (const auto& r : tsv_rows(text)) {
      ++lineno;
      if (r.size() < 2 || r[0].empty()) {
        fail(ErrorCategory::data, "frequency table row " + std::to_string(lineno) + ": expected word<TAB>count");
      }
      try {
        rows.emplace_back(r[0], std::stoull(r[1]));
      } catch (const std::exception&) {
        fail(ErrorCategory::data, "frequency table row " + std::to_string(lineno) + ": bad count '" + r[1] + "'");
      }
    }
    return FrequencyTable(std::move(rows));
  }

  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

  std::uint64_t count(const std::string& w) const {
    auto it = counts_.find(w);
    return it == counts_.end() ? 0 : it->second;
  }

  std::set<std::string> top(std::size_t k) const {
    std::set<std::string> out;
    for (std::size_t i = 0; i < std::min(k, rows_.size()); ++i) out.insert(rows_[i].first);
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::uint64_t>> rows_;
  std::unordered_map<std::string, std::uint64_t> counts_;
};

struct NounRecord {
  std::string word;
  std::string lemma;
  std::string tag;
  std::uint64_t frequency = 0;
};

inline std::vector<NounRecord> parse_nouns(std::string_view text) {
  std::vector<NounRecord> out;
  for (const auto& r : tsv_rows(text)) {
    if (r.size() < 3 || r[0].empty()) fail(ErrorCategory::data, "noun table: expected word, lemma, tag[, frequency]");
    NounRecord n{to_lower(r[0]), to_lower(r[1]), r[2], 0};
    if (r.size() >= 4 && !r[3].empty()) n.frequency = std::stoull(r[3]);
    out.push_back(std::move(n));
  }
  return out;
}

/// First column of a one-word-per-line list.
inline std::set<std::string> parse_word_list(std::string_view text) {
  std::set<std::string> out;
  for (const auto& r : tsv_rows(text)) {
    const auto w = trim(r[0]);
    if (!w.empty()) out.insert(to_lower(w));
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view text,
                                                                    std::string_view what) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text)) {
    ++lineno;
    if (trim_view(line).empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() < 2 || trim_view(cols[0]).empty() || trim_view(cols[1]).empty()) {
      fail(ErrorCategory::data, std::string(what) + ":" + std::to_string(lineno) + ": expected two tab-separated fields");
    }
    out.emplace_back(trim(cols[0]), trim(cols[1]));
  }
  return out;
}

// ================================================================ lexicon

inline constexpr std::array<std::string_view, 7> kCategories = {
    "animals", "clothing", "colors", "food", "vehicles", "professions", "none",
};

struct LexiconItem {
  std::string word;
  std::string cefr_level;
  std::string category;
};

struct Lexicon {
  std::vector<LexiconItem> items;

  static Lexicon parse(std::string_view text) {
    Lexicon lex;
    std::set<std::string> seen;
    for (const auto& r : tsv_rows(text)) {
      if (r.size() < 3) fail(ErrorCategory::data, "lexicon: expected word, cefr_level, category");
      LexiconItem it{to_lower(trim(r[0])), trim(r[1]), trim(r[2])};
      if (std::find(kCategories.begin(), kCategories.end(), it.category) == kCategories.end()) {
        fail(ErrorCategory::data, "lexicon: unknown category '" + it.category + "' for '" + it.word + "'");
      }
      if (!seen.insert(it.word).second) fail(ErrorCategory::data, "lexicon: duplicate word '" + it.word + "'");
      lex.items.push_back(std::move(it));
    }
    return lex;
  }

  std::vector<std::string> words_in(std::string_view category) const {
    std::vector<std::string> out;
    for (const auto& it : items) {
      if (it.category == category) out.push_back(it.word);
    }
    return out;
  }

  std::vector<std::string> words_at_levels(const std::set<std::string>& levels) const {
    std::vector<std::string> out;
    for (const auto& it : items) {
      if (levels.count(it.cefr_level)) out.push_back(it.word);
    }
    return out;
  }
};

// ================================================================ CEN

/// Common English nouns: top_k most frequent words that are tagged NN with
/// lemma == word and at least min_len characters. Sorted, deduplicated.
inline std::vector<std::string> build_cen(const FrequencyTable& freq, const std::vector<NounRecord>& nouns,
                                          std::size_t top_k = 10000, std::size_t min_len = 3) {
  if (top_k < 1 || min_len < 1) fail(ErrorCategory::usage, "build_cen: top_k and min_len must be >= 1");
  if (freq.empty()) fail(ErrorCategory::data, "build_cen: empty frequency table");
  const auto top = freq.top(top_k);
  std::set<std::string> keep;
  for (const auto& n : nouns) {
    if (n.tag == "NN" && n.lemma == n.word && n.word.size() >= min_len && top.count(n.word)) {
      keep.insert(n.word);
    }
  }
  if (keep.empty()) fail(ErrorCategory::data, "build_cen: no nouns survived filtering (mismatched sources?)");
  return {keep.begin(), keep.end()};
}

struct PluralPair {
  std::string singular;
  std::string plural;
};

/// CEN minus mass nouns, pluralized, keeping pairs whose plural occurs at
/// least min_plural_count times in the frequency table.
inline std::vector<PluralPair> build_plural_pairs(const std::vector<std::string>& cen,
                                                  const std::set<std::string>& mass_nouns,
                                                  const FrequencyTable& freq,
                                                  std::uint64_t min_plural_count = 50) {
  std::vector<PluralPair> out;
  for (const auto& w : cen) {
    if (mass_nouns.count(w)) continue;
    std::string p = pluralize(w);
    if (freq.count(p) >= min_plural_count) out.push_back({w, std::move(p)});
  }
  return out;
}

// ================================================================ rhymes

/// First pronunciation per word, lowercased keys.
class PronDict {
 public:
  static PronDict parse(std::string_view text) {
    PronDict d;
    for (const auto& line : lines_of(text)) {
      if (trim_view(line).empty() || line.rfind(";;;", 0) == 0 || line.front() == '#') continue;
      auto toks = split_ws(line);
      if (toks.size() < 2) continue;
      std::string head = to_lower(toks[0]);
      if (head.find('(') != std::string::npos) continue;  // alternate pronunciation
      toks.erase(toks.begin());
      d.entries_.emplace(std::move(head), std::move(toks));
    }
    return d;
  }

  const std::vector<std::string>* find(const std::string& w) const {
    auto it = entries_.find(w);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

/// Phonemes from the last primary-stressed vowel to the end; empty when the
/// pronunciation carries no primary stress.
inline std::vector<std::string> rime_of(const std::vector<std::string>& phones) {
  for (std::size_t i = phones.size(); i-- > 0;) {
    if (!phones[i].empty() && phones[i].back() == '1') {
      return {phones.begin() + static_cast<std::ptrdiff_t>(i), phones.end()};
    }
  }
  return {};
}

struct RhymeGroup {
  std::size_t id = 0;
  std::string rime;                // space-joined phonemes
  std::vector<std::string> words;  // sorted
};

struct RhymeGroups {
  std::vector<RhymeGroup> groups;
  std::map<std::string, std::size_t> index;
  std::vector<std::string> missing;    // lexicon words absent from the dictionary
  std::vector<std::string> unstressed; // no primary stress, no rime

  const RhymeGroup* group_of(const std::string& w) const {
    auto it = index.find(w);
    return it == index.end() ? nullptr : &groups[it->second];
  }
};

inline const std::set<std::string>& default_rhyme_levels() {
  static const std::set<std::string> levels{"A1", "A2", "B1"};
  return levels;
}

/// Perfect-rhyme partition of lexicon words at the given CEFR levels.
/// Groups are sorted by their first word and numbered in that order.
inline RhymeGroups build_rhyme_groups(const PronDict& dict, const Lexicon& lexicon,
                                      const std::set<std::string>& levels = default_rhyme_levels()) {
  RhymeGroups out;
  std::map<std::string, std::set<std::string>> by_rime;
  for (const auto& w : lexicon.words_at_levels(levels)) {
    const auto* phones = dict.find(w);
    if (!phones) {
      out.missing.push_back(w);
      continue;
    }
    auto r = rime_of(*phones);
    if (r.empty()) {
      out.unstressed.push_back(w);
      continue;
    }
    by_rime[join(r, " ")].insert(w);
  }
  for (auto& [rime, words] : by_rime) {
    if (words.size() < 2) continue;
    out.groups.push_back({0, rime, {words.begin(), words.end()}});
  }
  std::sort(out.groups.begin(), out.groups.end(),
            [](const RhymeGroup& a, const RhymeGroup& b) { return a.words.front() < b.words.front(); });
  for (std::size_t i = 0; i < out.groups.size(); ++i) {
    out.groups[i].id = i;
    for (const auto& w : out.groups[i].words) out.index[w] = i;
  }
  return out;
}

// ================================================================ translations

struct TranslationLexicon {
  // english word -> language -> translations in source order
  std::map<std::string, std::map<std::string, std::vector<std::string>>> entries;

  void add_language(const std::string& lang, const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [en, tr] : pairs) {
      auto& set = entries[to_lower(en)][lang];
      if (std::find(set.begin(), set.end(), tr) == set.end()) set.push_back(tr);
    }
  }

  const std::vector<std::string>* find(const std::string& word, const std::string& lang) const {
    auto it = entries.find(word);
    if (it == entries.end()) return nullptr;
    auto jt = it->second.find(lang);
    if (jt == it->second.end() || jt->second.empty()) return nullptr;
    return &jt->second;
  }
};

// ================================================================ export

inline std::string cen_to_jsonl(const std::vector<std::string>& cen) {
  std::string out;
  for (const auto& w : cen) out += json{{"word", w}}.dump() + "\n";
  return out;
}

inline std::string plural_pairs_to_jsonl(const std::vector<PluralPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += json{{"singular", p.singular}, {"plural", p.plural}}.dump() + "\n";
  return out;
}

inline std::string rhyme_groups_to_jsonl(const RhymeGroups& g) {
  std::string out;
  for (const auto& grp : g.groups) {
    out += json{{"id", grp.id}, {"rime", grp.rime}, {"words", grp.words}}.dump() + "\n";
  }
  return out;
}

// ================================================================ resources

/// Source ids the harness knows about.
namespace source {
inline const std::string freq = "wikitext_freq";
inline const std::string nouns = "nouns";
inline const std::string mass_nouns = "mass_nouns";
inline const std::string lexicon = "cefr_lexicon";
inline const std::string cmudict = "cmudict";
inline const std::string wiktionary_de = "wiktionary_de";
inline const std::string wiktionary_es = "wiktionary_es";
inline const std::string wiktionary_fr = "wiktionary_fr";
inline const std::string cola = "cola";
inline const std::string hans = "hans_passive";
inline const std::string lama = "negated_lama";
inline const std::string antonyms = "olmpics_antonyms";
inline const std::string wordnet_antonyms = "wordnet_antonyms";
inline const std::string synonyms = "olmpics_synonyms";
inline const std::string comparison = "olmpics_comparison";
inline const std::string cause_effect = "bigbench_cause_effect";
inline const std::string novel_concepts = "bigbench_novel_concepts";
inline const std::string formality = "formality";
inline const std::string sst = "sst";
inline const std::string stsb = "stsb";
inline const std::string wic = "wic";
}  // namespace source

inline std::vector<std::string> load_cen(const SourceManifest& m, std::size_t top_k = 10000, std::size_t min_len = 3) {
  const auto freq = FrequencyTable::parse(m.read_verified(source::freq, SourceFormat::freq_table));
  const auto nouns = parse_nouns(m.read_verified(source::nouns, SourceFormat::tsv_lexicon));
  return build_cen(freq, nouns, top_k, min_len);
}

inline std::vector<PluralPair> load_plural_pairs(const SourceManifest& m) {
  const auto freq = FrequencyTable::parse(m.read_verified(source::freq, SourceFormat::freq_table));
  const auto nouns = parse_nouns(m.read_verified(source::nouns, SourceFormat::tsv_lexicon));
  const auto mass = parse_word_list(m.read_verified(source::mass_nouns, SourceFormat::tsv_lexicon));
  return build_plural_pairs(build_cen(freq, nouns), mass, freq);
}

inline Lexicon load_lexicon(const SourceManifest& m) {
  return Lexicon::parse(m.read_verified(source::lexicon, SourceFormat::tsv_lexicon));
}

inline RhymeGroups load_rhyme_groups(const SourceManifest& m) {
  const auto dict = PronDict::parse(m.read_verified(source::cmudict, SourceFormat::pron_dict));
  return build_rhyme_groups(dict, load_lexicon(m));
}

}  // namespace instrind::corpus

#endif  // INSTRIND_CORPUS_HPP
