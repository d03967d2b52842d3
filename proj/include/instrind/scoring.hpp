#ifndef INSTRIND_SCORING_HPP
#define INSTRIND_SCORING_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "instrind/common.hpp"
#include "instrind/types.hpp"

namespace instrind::scoring {

struct ScoringOptions {
  /// Also split set answers on " and " ("cat, dog and cow"). Off by default.
  bool accept_and_joins = false;
};

inline bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }

/// Leading whitespace skipped, then everything up to the first newline or the
/// first '.', '!' or '?' followed by whitespace or end of text (the mark is
/// kept). Trimmed, case preserved.
inline std::string first_sentence(std::string_view raw) {
  std::string_view s = raw;
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  if (const auto nl = s.find('\n'); nl != std::string_view::npos) s = s.substr(0, nl);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_sentence_end(s[i]) && (i + 1 == s.size() || is_space(s[i + 1]))) {
      s = s.substr(0, i + 1);
      break;
    }
  }
  return trim(s);
}

/// Match-style normal form: lowercased first sentence with one trailing
/// sentence mark removed.
inline std::string normalize(std::string_view raw) {
  std::string s = to_lower(first_sentence(raw));
  if (!s.empty() && is_sentence_end(s.back())) s.pop_back();
  return trim(s);
}

/// Lowercase, ASCII punctuation deleted, whitespace-tokenized.
inline std::vector<std::string> unigram_tokens(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : to_lower(text)) {
    if (!std::ispunct(static_cast<unsigned char>(c))) cleaned += c;
  }
  return split_ws(cleaned);
}

/// F1 of the unigram multiset overlap between two token lists.
inline double unigram_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int overlap = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  return 2.0 * overlap / static_cast<double>(pred.size() + gold.size());
}

inline double unigram_f1(std::string_view pred, std::string_view gold) {
  return unigram_f1(unigram_tokens(pred), unigram_tokens(gold));
}

namespace detail {

inline std::set<std::string> set_items(const std::string& normalized, const ScoringOptions& opt) {
  std::vector<std::string> parts = split(normalized, ',');
  if (opt.accept_and_joins) {
    std::vector<std::string> expanded;
    for (const auto& p : parts) {
      std::string_view rest = p;
      while (true) {
        const auto pos = rest.find(" and ");
        if (pos == std::string_view::npos) {
          expanded.emplace_back(rest);
          break;
        }
        expanded.emplace_back(rest.substr(0, pos));
        rest.remove_prefix(pos + 5);
      }
    }
    parts = std::move(expanded);
  }
  std::set<std::string> out;
  for (auto& p : parts) {
    auto t = trim(p);
    if (opt.accept_and_joins && t.rfind("and ", 0) == 0) t = trim(t.substr(4));
    if (!t.empty()) out.insert(std::move(t));
  }
  return out;
}

/// Whitespace/comma-delimited tokens.
inline std::vector<std::string> delimited_tokens(std::string_view s) {
  std::string spaced(s);
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  return split_ws(spaced);
}

inline bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  }
  return false;
}

inline std::set<std::string> similarity_forms(const std::string& gold_normalized) {
  std::set<std::string> forms{gold_normalized};
  const auto dash = gold_normalized.find(" - ");
  if (dash != std::string::npos) {
    forms.insert(trim(gold_normalized.substr(0, dash)));
    forms.insert(trim(gold_normalized.substr(dash + 3)));
  }
  return forms;
}

inline std::set<std::string> wic_forms(const std::string& gold_normalized) {
  if (gold_normalized == "same") return {"same", "yes", "true"};
  if (gold_normalized == "not the same") return {"not the same", "no", "false"};
  return {gold_normalized};
}

}  // namespace detail

/// Score of one raw prediction against a demonstration's gold outputs,
/// in [0, 1]. An empty prediction scores 0.
inline double score(MetricKind kind, std::string_view prediction, const Demonstration& gold,
                    const ScoringOptions& opt = {}) {
  if (trim_view(prediction).empty()) return 0.0;
  const std::string pred = normalize(prediction);
  switch (kind) {
    case MetricKind::exact_match:
    case MetricKind::in_gold_set:
    case MetricKind::rhyme_group:
      if (pred.empty()) return 0.0;
      for (const auto& g : gold.gold) {
        if (normalize(g) == pred) return 1.0;
      }
      return 0.0;
    case MetricKind::exact_set_match: {
      const auto p = detail::set_items(pred, opt);
      if (p.empty()) return 0.0;
      for (const auto& g : gold.gold) {
        if (detail::set_items(normalize(g), opt) == p) return 1.0;
      }
      return 0.0;
    }
    case MetricKind::contains_gold: {
      const auto p = detail::delimited_tokens(pred);
      for (const auto& g : gold.gold) {
        if (detail::contains_run(p, detail::delimited_tokens(normalize(g)))) return 1.0;
      }
      return 0.0;
    }
    case MetricKind::unigram_f1: {
      const auto p = unigram_tokens(first_sentence(prediction));
      double best = 0.0;
      for (const auto& g : gold.gold) best = std::max(best, unigram_f1(p, unigram_tokens(g)));
      return best;
    }
    case MetricKind::similarity_label:
      for (const auto& g : gold.gold) {
        if (detail::similarity_forms(normalize(g)).count(pred)) return 1.0;
      }
      return 0.0;
    case MetricKind::wic_label:
      for (const auto& g : gold.gold) {
        if (detail::wic_forms(normalize(g)).count(pred)) return 1.0;
      }
      return 0.0;
  }
  fail(ErrorCategory::usage, "unknown metric kind");
}

}  // namespace instrind::scoring

#endif  // INSTRIND_SCORING_HPP
