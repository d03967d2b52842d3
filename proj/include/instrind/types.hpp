#ifndef INSTRIND_TYPES_HPP
#define INSTRIND_TYPES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instrind/common.hpp"

namespace instrind {

enum class TaskId {
  first_letter,
  second_letter,
  list_letters,
  starting_with,
  pluralization,
  passivization,
  negation,
  antonyms,
  synonyms,
  membership,
  rhymes,
  larger_animal,
  cause_selection,
  common_concept,
  formality,
  sum,
  diff,
  num_to_word,
  translation_de,
  translation_es,
  translation_fr,
  sentiment,
  sentence_similarity,
  word_in_context,
};

inline constexpr std::array<TaskId, 24> kAllTasks = {
    TaskId::first_letter,   TaskId::second_letter,       TaskId::list_letters,
    TaskId::starting_with,  TaskId::pluralization,       TaskId::passivization,
    TaskId::negation,       TaskId::antonyms,            TaskId::synonyms,
    TaskId::membership,     TaskId::rhymes,              TaskId::larger_animal,
    TaskId::cause_selection, TaskId::common_concept,     TaskId::formality,
    TaskId::sum,            TaskId::diff,                TaskId::num_to_word,
    TaskId::translation_de, TaskId::translation_es,      TaskId::translation_fr,
    TaskId::sentiment,      TaskId::sentence_similarity, TaskId::word_in_context,
};

inline constexpr std::array<std::string_view, 24> kTaskNames = {
    "first_letter",   "second_letter",       "list_letters",
    "starting_with",  "pluralization",       "passivization",
    "negation",       "antonyms",            "synonyms",
    "membership",     "rhymes",              "larger_animal",
    "cause_selection", "common_concept",     "formality",
    "sum",            "diff",                "num_to_word",
    "translation_de", "translation_es",      "translation_fr",
    "sentiment",      "sentence_similarity", "word_in_context",
};

inline std::string_view task_name(TaskId t) { return kTaskNames[static_cast<std::size_t>(t)]; }

inline std::optional<TaskId> find_task(std::string_view name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return kAllTasks[i];
  }
  return std::nullopt;
}

/// Like find_task, but an unknown name is a usage error listing every valid id.
inline TaskId parse_task(std::string_view name) {
  if (auto t = find_task(name)) return *t;
  std::string valid;
  for (auto n : kTaskNames) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  fail(ErrorCategory::usage,
       "unknown task '" + std::string(name) + "'; valid tasks: " + valid);
}

enum class MetricKind {
  exact_match,
  exact_set_match,
  contains_gold,
  in_gold_set,
  unigram_f1,
  rhyme_group,
  similarity_label,
  wic_label,
};

inline constexpr std::array<std::string_view, 8> kMetricNames = {
    "exact_match", "exact_set_match",  "contains_gold", "in_gold_set",
    "unigram_f1",  "rhyme_group",      "similarity_label", "wic_label",
};

inline std::string_view metric_name(MetricKind k) {
  return kMetricNames[static_cast<std::size_t>(k)];
}

inline MetricKind parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return static_cast<MetricKind>(i);
  }
  fail(ErrorCategory::usage, "unknown metric kind '" + std::string(name) + "'");
}

inline MetricKind metric_for(TaskId t) {
  switch (t) {
    case TaskId::starting_with:
    case TaskId::membership: return MetricKind::exact_set_match;
    case TaskId::synonyms: return MetricKind::contains_gold;
    case TaskId::translation_de:
    case TaskId::translation_es:
    case TaskId::translation_fr: return MetricKind::in_gold_set;
    case TaskId::common_concept:
    case TaskId::formality: return MetricKind::unigram_f1;
    case TaskId::rhymes: return MetricKind::rhyme_group;
    case TaskId::sentence_similarity: return MetricKind::similarity_label;
    case TaskId::word_in_context: return MetricKind::wic_label;
    default: return MetricKind::exact_match;
  }
}

/// Label-balance policy applied when sampling five induction demonstrations.
enum class SamplingConstraint {
  none,
  two_per_label,     // sentiment, word_in_context
  score_extremes,    // sentence_similarity: one score-0 and one score-5 demo
};

inline SamplingConstraint constraint_for(TaskId t) {
  switch (t) {
    case TaskId::sentiment:
    case TaskId::word_in_context: return SamplingConstraint::two_per_label;
    case TaskId::sentence_similarity: return SamplingConstraint::score_extremes;
    default: return SamplingConstraint::none;
  }
}

/// One input-output pair. `gold` keeps insertion order; gold.front() is the
/// surface form shown in prompts, the whole set is used for scoring.
struct Demonstration {
  std::string input;
  std::vector<std::string> gold;
  std::map<std::string, std::string> aux;

  const std::string& first_gold() const { return gold.front(); }

  void add_gold(std::string g) {
    for (const auto& existing : gold) {
      if (existing == g) return;
    }
    gold.push_back(std::move(g));
  }

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

inline void validate(const Demonstration& d) {
  if (d.input.empty()) fail(ErrorCategory::data, "demonstration with empty input");
  if (d.gold.empty()) fail(ErrorCategory::data, "demonstration '" + d.input + "' has no gold output");
  for (const auto& g : d.gold) {
    if (g.empty()) fail(ErrorCategory::data, "demonstration '" + d.input + "' has an empty gold output");
  }
}

struct TaskDataset {
  TaskId task{};
  std::vector<Demonstration> induce;
  std::vector<Demonstration> execute;
  std::uint64_t seed = 0;

  friend bool operator==(const TaskDataset&, const TaskDataset&) = default;
};

struct InductionExample {
  TaskId task{};
  std::vector<Demonstration> demos;  // exactly five
  std::string seed_path;             // e.g. "seed=7/task=sum/example=3"
};

}  // namespace instrind

#endif  // INSTRIND_TYPES_HPP
