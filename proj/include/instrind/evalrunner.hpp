#ifndef INSTRIND_EVALRUNNER_HPP
#define INSTRIND_EVALRUNNER_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/model.hpp"
#include "instrind/prompting.hpp"
#include "instrind/scoring.hpp"
#include "instrind/taskgen.hpp"
#include "instrind/types.hpp"

namespace instrind::eval {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr double kMaxFailureRate = 0.2;

struct RunConfig {
  std::vector<TaskId> tasks;
  std::string backend = "oracle";
  std::string model;
  std::string exec_backend;  // empty: same as backend
  std::string exec_model;
  std::string induction_template = "friend_puzzle";
  std::size_t n_induction = 100;
  std::size_t n_icl = 100;
  std::uint64_t seed = 0;
  std::size_t max_in_flight = 4;
  std::string out_dir;
  int induction_max_tokens = model::kInductionMaxTokens;
  int execution_max_tokens = model::kExecutionMaxTokens;
  double max_failure_rate = kMaxFailureRate;
};

inline json config_to_json(const RunConfig& c) {
  json tasks = json::array();
  for (auto t : c.tasks) tasks.push_back(task_name(t));
  return json{{"tasks", tasks},
              {"backend", c.backend},
              {"model", c.model},
              {"exec_backend", c.exec_backend.empty() ? c.backend : c.exec_backend},
              {"exec_model", c.exec_model.empty() ? c.model : c.exec_model},
              {"template", c.induction_template},
              {"n_induction", c.n_induction},
              {"n_icl", c.n_icl},
              {"seed", c.seed},
              {"max_in_flight", c.max_in_flight},
              {"induction_max_tokens", c.induction_max_tokens},
              {"execution_max_tokens", c.execution_max_tokens}};
}

struct ExecutionRecord {
  std::size_t group = 0;  // instruction index (execution) or trial index (ICL)
  std::string instruction;
  std::string input;
  std::string output;
  std::vector<std::string> gold;
  std::map<std::string, std::string> aux;
  double item_score = 0.0;
  bool failed = false;  // backend error, or empty instruction
  std::string error;
};

/// per_instruction holds one mean per instruction; for ICL verification
/// each trial counts as one entry.
struct TaskScore {
  TaskId task{};
  std::vector<double> per_instruction;
  double mean = 0.0;
  std::size_t n_items = 0;
  std::size_t failures = 0;

  friend bool operator==(const TaskScore&, const TaskScore&) = default;
};

inline json score_to_json(const TaskScore& s) {
  return json{{"task", task_name(s.task)},
              {"per_instruction", s.per_instruction},
              {"mean", s.mean},
              {"n_items", s.n_items},
              {"failures", s.failures}};
}

inline TaskScore score_from_json(const json& j) {
  TaskScore s;
  s.task = parse_task(j.at("task").get<std::string>());
  s.per_instruction = j.at("per_instruction").get<std::vector<double>>();
  s.mean = j.at("mean").get<double>();
  s.n_items = j.at("n_items").get<std::size_t>();
  s.failures = j.at("failures").get<std::size_t>();
  return s;
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

/// Groups are averaged first, then averaged again; summation follows record
/// order so a replay reproduces the same bits.
inline TaskScore aggregate(TaskId task, const std::vector<ExecutionRecord>& records, std::size_t n_groups) {
  TaskScore s;
  s.task = task;
  std::vector<double> sums(n_groups, 0.0);
  std::vector<std::size_t> counts(n_groups, 0);
  for (const auto& r : records) {
    sums.at(r.group) += r.item_score;
    ++counts.at(r.group);
    if (r.failed) ++s.failures;
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    s.per_instruction.push_back(counts[g] ? sums[g] / static_cast<double>(counts[g]) : 0.0);
  }
  s.mean = mean_of(s.per_instruction);
  s.n_items = records.size();
  return s;
}

/// Prompt/completion/score rows of one experiment on one task, in item order.
struct RunLog {
  std::vector<json> prompts;
  std::vector<json> completions;
  std::vector<json> scores;
};

namespace detail {

inline void check_failures(TaskId task, std::string_view experiment, std::size_t failures, std::size_t total,
                           double max_rate) {
  if (total && static_cast<double>(failures) > max_rate * static_cast<double>(total)) {
    fail(ErrorCategory::run_aborted, std::string(experiment) + " " + std::string(task_name(task)) + ": " +
                                         std::to_string(failures) + " of " + std::to_string(total) +
                                         " items failed");
  }
}

inline json record_row(std::string_view experiment, TaskId task, std::size_t index, const ExecutionRecord& r) {
  json row{{"experiment", experiment}, {"task", task_name(task)}, {"index", index},   {"group", r.group},
           {"input", r.input},         {"gold", r.gold},           {"aux", r.aux},    {"output", r.output},
           {"score", r.item_score},    {"failed", r.failed}};
  if (!r.instruction.empty()) row["instruction"] = r.instruction;
  return row;
}

inline json completion_row(std::string_view experiment, TaskId task, std::size_t index, const std::string& text,
                           const std::string& error) {
  json row{{"experiment", experiment}, {"task", task_name(task)}, {"index", index}, {"text", text}};
  if (!error.empty()) row["error"] = error;
  return row;
}

inline json prompt_row(std::string_view experiment, TaskId task, std::size_t index, const std::string& prompt) {
  return json{{"experiment", experiment}, {"task", task_name(task)}, {"index", index}, {"prompt", prompt}};
}

}  // namespace detail

// ================================================================ experiments

/// In-context verification: each trial samples five induce demonstrations
/// and one execute input, and scores the model's continuation.
inline TaskScore run_icl_verification(const TaskDataset& ds, model::CompletionClient& client, const RunConfig& cfg,
                                      RunLog* log = nullptr, std::vector<ExecutionRecord>* records_out = nullptr) {
  const std::size_t n = cfg.n_icl;
  if (n == 0) fail(ErrorCategory::usage, "n_icl must be >= 1");
  if (n > ds.execute.size()) {
    fail(ErrorCategory::usage, std::string(task_name(ds.task)) + ": n_icl=" + std::to_string(n) + " exceeds the " +
                                   std::to_string(ds.execute.size()) + " execute items");
  }
  const auto examples = taskgen::sample_induction_examples(ds, n, derive_seed(cfg.seed, "icl"));
  Rng rng(derive_seed(cfg.seed, "icl-test/" + std::string(task_name(ds.task))));
  const auto test_idx = rng.sample_indices(ds.execute.size(), n);

  std::vector<model::CompletionRequest> reqs;
  for (std::size_t k = 0; k < n; ++k) {
    model::CompletionRequest r;
    r.prompt = prompting::render_in_context_prompt(examples[k].demos, ds.execute[test_idx[k]].input).text;
    r.max_tokens = cfg.execution_max_tokens;
    r.stop = {model::kExecutionStop};
    r.model_name = cfg.exec_model.empty() ? cfg.model : cfg.exec_model;
    reqs.push_back(std::move(r));
  }
  const auto outcomes = client.complete_all(reqs, cfg.max_in_flight);

  std::vector<ExecutionRecord> records;
  const auto metric = metric_for(ds.task);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& item = ds.execute[test_idx[k]];
    ExecutionRecord r;
    r.group = k;
    r.input = item.input;
    r.gold = item.gold;
    r.aux = item.aux;
    if (outcomes[k].ok()) {
      r.output = outcomes[k].response->text;
      r.item_score = scoring::score(metric, r.output, item);
    } else {
      r.failed = true;
      r.error = outcomes[k].error;
    }
    if (log) {
      log->prompts.push_back(detail::prompt_row("icl", ds.task, k, reqs[k].prompt));
      log->completions.push_back(detail::completion_row("icl", ds.task, k, r.output, r.error));
      log->scores.push_back(detail::record_row("icl", ds.task, k, r));
    }
    records.push_back(std::move(r));
  }
  auto s = aggregate(ds.task, records, n);
  if (records_out) *records_out = records;
  detail::check_failures(ds.task, "icl", s.failures, n, cfg.max_failure_rate);
  return s;
}

struct InductionResult {
  TaskId task{};
  std::vector<std::string> raw;         // completion text, "" on failure
  std::vector<std::string> normalized;  // first sentence, lowercased
  std::size_t failures = 0;
};

inline InductionResult run_induction(TaskId task, const std::vector<InductionExample>& examples,
                                     model::CompletionClient& client, const RunConfig& cfg,
                                     const prompting::PromptTemplate& tpl = prompting::default_induction_template(),
                                     RunLog* log = nullptr) {
  if (examples.empty()) fail(ErrorCategory::usage, std::string(task_name(task)) + ": no induction examples");
  std::vector<model::CompletionRequest> reqs;
  for (const auto& ex : examples) {
    model::CompletionRequest r;
    r.prompt = prompting::render_induction_prompt(ex.demos, tpl).text;
    r.max_tokens = cfg.induction_max_tokens;
    r.model_name = cfg.model;
    reqs.push_back(std::move(r));
  }
  const auto outcomes = client.complete_all(reqs, cfg.max_in_flight);
  InductionResult res;
  res.task = task;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    std::string text = outcomes[k].ok() ? outcomes[k].response->text : "";
    if (!outcomes[k].ok()) ++res.failures;
    if (log) {
      log->prompts.push_back(detail::prompt_row("induce", task, k, reqs[k].prompt));
      log->completions.push_back(detail::completion_row("induce", task, k, text, outcomes[k].error));
    }
    res.normalized.push_back(scoring::normalize(text));
    res.raw.push_back(std::move(text));
  }
  detail::check_failures(task, "induce", res.failures, outcomes.size(), cfg.max_failure_rate);
  return res;
}

/// Execution accuracy: every instruction is applied to every execute item.
/// An empty instruction scores 0 on all items without calling the backend.
inline TaskScore run_execution_accuracy(const TaskDataset& ds, const std::vector<std::string>& instructions,
                                        model::CompletionClient& client, const RunConfig& cfg,
                                        RunLog* log = nullptr, std::vector<ExecutionRecord>* records_out = nullptr) {
  if (instructions.empty()) fail(ErrorCategory::usage, std::string(task_name(ds.task)) + ": no instructions");
  if (ds.execute.empty()) fail(ErrorCategory::data, std::string(task_name(ds.task)) + ": empty execute set");
  const std::size_t n_items = ds.execute.size();

  std::vector<model::CompletionRequest> reqs;
  std::vector<std::size_t> req_of(instructions.size() * n_items, SIZE_MAX);
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (trim_view(instructions[i]).empty()) continue;
    for (std::size_t j = 0; j < n_items; ++j) {
      model::CompletionRequest r;
      r.prompt = prompting::render_execution_prompt(instructions[i], ds.execute[j].input).text;
      r.max_tokens = cfg.execution_max_tokens;
      r.stop = {model::kExecutionStop};
      r.model_name = cfg.exec_model.empty() ? cfg.model : cfg.exec_model;
      req_of[i * n_items + j] = reqs.size();
      reqs.push_back(std::move(r));
    }
  }
  const auto outcomes = client.complete_all(reqs, cfg.max_in_flight);

  const auto metric = metric_for(ds.task);
  std::vector<ExecutionRecord> records;
  std::size_t backend_failures = 0;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    for (std::size_t j = 0; j < n_items; ++j) {
      const std::size_t index = i * n_items + j;
      const auto& item = ds.execute[j];
      ExecutionRecord r;
      r.group = i;
      r.instruction = instructions[i];
      r.input = item.input;
      r.gold = item.gold;
      r.aux = item.aux;
      std::string prompt;
      if (req_of[index] == SIZE_MAX) {
        r.failed = true;
        r.error = "empty instruction";
      } else {
        const auto& o = outcomes[req_of[index]];
        prompt = reqs[req_of[index]].prompt;
        if (o.ok()) {
          r.output = o.response->text;
          r.item_score = scoring::score(metric, r.output, item);
        } else {
          r.failed = true;
          r.error = o.error;
          ++backend_failures;
        }
      }
      if (log) {
        if (!prompt.empty()) log->prompts.push_back(detail::prompt_row("exec", ds.task, index, prompt));
        log->completions.push_back(detail::completion_row("exec", ds.task, index, r.output, r.error));
        log->scores.push_back(detail::record_row("exec", ds.task, index, r));
      }
      records.push_back(std::move(r));
    }
  }
  auto s = aggregate(ds.task, records, instructions.size());
  if (records_out) *records_out = records;
  detail::check_failures(ds.task, "exec", backend_failures, reqs.size(), cfg.max_failure_rate);
  return s;
}

// ================================================================ reference scoring

using PairScorer = std::function<double(const std::string& candidate, const std::string& reference)>;
using BatchScorer =
    std::function<std::vector<double>(const std::vector<std::pair<std::string, std::string>>& pairs)>;

inline PairScorer default_scorer() {
  return [](const std::string& c, const std::string& r) { return scoring::unigram_f1(c, r); };
}

/// For each candidate, the maximum score over all references.
inline std::vector<double> score_against_references(const std::vector<std::string>& candidates,
                                                    const std::vector<std::string>& references,
                                                    const BatchScorer& scorer) {
  if (references.empty()) fail(ErrorCategory::data, "reference scoring needs at least one reference");
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(candidates.size() * references.size());
  for (const auto& c : candidates) {
    for (const auto& r : references) pairs.emplace_back(c, r);
  }
  const auto flat = scorer(pairs);
  if (flat.size() != pairs.size()) {
    fail(ErrorCategory::backend, "scorer returned " + std::to_string(flat.size()) + " scores for " +
                                     std::to_string(pairs.size()) + " pairs");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double best = flat[i * references.size()];
    for (std::size_t k = 1; k < references.size(); ++k) best = std::max(best, flat[i * references.size() + k]);
    out.push_back(best);
  }
  return out;
}

inline std::vector<double> score_against_references(const std::vector<std::string>& candidates,
                                                    const std::vector<std::string>& references,
                                                    const PairScorer& scorer = default_scorer()) {
  return score_against_references(candidates, references,
                                  BatchScorer([&](const std::vector<std::pair<std::string, std::string>>& pairs) {
                                    std::vector<double> out;
                                    out.reserve(pairs.size());
                                    for (const auto& [c, r] : pairs) out.push_back(scorer(c, r));
                                    return out;
                                  }));
}

/// Runs `command` with a JSONL file of {"candidate","reference"} rows on
/// stdin and reads one score per output line (e.g. a neural similarity
/// model wrapped in a script).
inline BatchScorer external_scorer(std::string command) {
  return [command = std::move(command)](const std::vector<std::pair<std::string, std::string>>& pairs) {
    const auto dir = fs::temp_directory_path() / ("instrind-scorer-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto in = dir / "pairs.jsonl";
    const auto out = dir / "scores.txt";
    std::string body;
    for (const auto& [c, r] : pairs) body += json{{"candidate", c}, {"reference", r}}.dump() + "\n";
    write_file(in, body);
    const std::string cmd = command + " < '" + in.string() + "' > '" + out.string() + "'";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      fs::remove_all(dir);
      fail(ErrorCategory::backend, "external scorer exited with status " + std::to_string(rc));
    }
    std::vector<double> scores;
    for (const auto& line : lines_of(read_file(out))) {
      if (trim_view(line).empty()) continue;
      try {
        scores.push_back(std::stod(line));
      } catch (const std::exception&) {
        fs::remove_all(dir);
        fail(ErrorCategory::backend, "external scorer printed a non-numeric line: " + line);
      }
    }
    fs::remove_all(dir);
    return scores;
  };
}

/// One instruction per line; blank lines and '#' comments skipped.
inline std::vector<std::string> parse_instruction_lines(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& line : lines_of(text)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<std::string> load_references(const fs::path& dir, TaskId task) {
  const auto path = dir / (std::string(task_name(task)) + ".txt");
  if (!fs::exists(path)) fail(ErrorCategory::missing_source, "no reference file " + path.string());
  auto refs = parse_instruction_lines(read_file(path));
  if (refs.empty()) fail(ErrorCategory::data, path.string() + ": no reference instructions");
  return refs;
}

// ================================================================ tally

/// Normalized instruction -> count, most frequent first, ties by text.
inline std::vector<std::pair<std::string, std::size_t>> tally_instructions(const std::vector<std::string>& instructions) {
  std::map<std::string, std::size_t> counts;
  for (const auto& i : instructions) ++counts[scoring::normalize(i)];
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// ================================================================ run directory

inline std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> rows;
  if (!fs::exists(path)) return rows;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(read_file(path))) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

inline void write_jsonl(const fs::path& path, const std::vector<json>& rows) {
  std::string body;
  for (const auto& r : rows) body += r.dump() + "\n";
  write_file(path, body);
}

inline json read_json_or(const fs::path& path, json fallback) {
  if (!fs::exists(path)) return fallback;
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCategory::data, path.string() + ": " + e.what());
  }
}

/// Replaces the rows of one (experiment, task) in a run file, keeping all
/// other rows in place, so re-running a command rewrites rather than appends.
inline void upsert_rows(const fs::path& path, std::string_view experiment, TaskId task, const std::vector<json>& rows) {
  std::vector<json> kept;
  for (auto& r : read_jsonl(path)) {
    if (r.value("experiment", "") == experiment && r.value("task", "") == task_name(task)) continue;
    kept.push_back(std::move(r));
  }
  kept.insert(kept.end(), rows.begin(), rows.end());
  write_jsonl(path, kept);
}

/// Persists one experiment's records and summary entry under `dir`.
inline void persist(const fs::path& dir, std::string_view experiment, TaskId task, const RunLog& log,
                    const json& summary_entry, const RunConfig& cfg) {
  fs::create_directories(dir);
  auto config = read_json_or(dir / "config.json", json::object());
  config[std::string(experiment)] = config_to_json(cfg);
  write_file(dir / "config.json", config.dump(2) + "\n");
  upsert_rows(dir / "prompts.jsonl", experiment, task, log.prompts);
  upsert_rows(dir / "completions.jsonl", experiment, task, log.completions);
  if (!log.scores.empty() || fs::exists(dir / "scores.jsonl")) {
    upsert_rows(dir / "scores.jsonl", experiment, task, log.scores);
  }
  auto summary = read_json_or(dir / "summary.json", json::object());
  summary["tasks"][std::string(task_name(task))][std::string(experiment)] = summary_entry;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

inline json induction_summary(const InductionResult& r) {
  return json{{"instructions", r.raw}, {"n", r.raw.size()}, {"failures", r.failures}};
}

/// Induced instructions recorded for a task in a run directory.
inline std::vector<std::string> induced_instructions(const fs::path& dir, TaskId task) {
  const auto summary = read_json_or(dir / "summary.json", json::object());
  const auto name = std::string(task_name(task));
  if (!summary.contains("tasks") || !summary["tasks"].contains(name) || !summary["tasks"][name].contains("induce")) {
    fail(ErrorCategory::missing_source, dir.string() + ": no induced instructions for " + name);
  }
  return summary["tasks"][name]["induce"]["instructions"].get<std::vector<std::string>>();
}

using ReplayKey = std::pair<std::string, TaskId>;  // (experiment, task)

/// Recomputes every TaskScore from persisted completions and the gold data
/// stored alongside the score rows.
inline std::map<ReplayKey, TaskScore> replay_run(const fs::path& dir) {
  std::map<std::tuple<std::string, std::string, std::size_t>, std::string> texts;
  for (const auto& c : read_jsonl(dir / "completions.jsonl")) {
    texts[{c.at("experiment").get<std::string>(), c.at("task").get<std::string>(), c.at("index").get<std::size_t>()}] =
        c.at("text").get<std::string>();
  }
  std::map<ReplayKey, std::vector<ExecutionRecord>> grouped;
  std::map<ReplayKey, std::size_t> n_groups;
  for (const auto& row : read_jsonl(dir / "scores.jsonl")) {
    const auto experiment = row.at("experiment").get<std::string>();
    const auto task = parse_task(row.at("task").get<std::string>());
    ExecutionRecord r;
    r.group = row.at("group").get<std::size_t>();
    r.input = row.at("input").get<std::string>();
    r.gold = row.at("gold").get<std::vector<std::string>>();
    r.aux = row.at("aux").get<std::map<std::string, std::string>>();
    r.failed = row.at("failed").get<bool>();
    auto it = texts.find({experiment, row.at("task").get<std::string>(), row.at("index").get<std::size_t>()});
    r.output = it == texts.end() ? "" : it->second;
    if (!r.failed) r.item_score = scoring::score(metric_for(task), r.output, Demonstration{r.input, r.gold, r.aux});
    const ReplayKey key{experiment, task};
    n_groups[key] = std::max(n_groups[key], r.group + 1);
    grouped[key].push_back(std::move(r));
  }
  std::map<ReplayKey, TaskScore> out;
  for (const auto& [key, records] : grouped) out[key] = aggregate(key.second, records, n_groups[key]);
  return out;
}

/// TaskScores as recorded in summary.json, keyed like replay_run.
inline std::map<ReplayKey, TaskScore> recorded_scores(const fs::path& dir) {
  std::map<ReplayKey, TaskScore> out;
  const auto summary = read_json_or(dir / "summary.json", json::object());
  if (!summary.contains("tasks")) return out;
  for (const auto& [task, entry] : summary["tasks"].items()) {
    for (const char* experiment : {"icl", "exec"}) {
      if (entry.contains(experiment)) out[{experiment, parse_task(task)}] = score_from_json(entry[experiment]);
    }
  }
  return out;
}

}  // namespace instrind::eval

#endif  // INSTRIND_EVALRUNNER_HPP
