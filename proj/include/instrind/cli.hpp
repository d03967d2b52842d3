#ifndef INSTRIND_CLI_HPP
#define INSTRIND_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/corpus.hpp"
#include "instrind/evalrunner.hpp"
#include "instrind/http_backend.hpp"
#include "instrind/model.hpp"
#include "instrind/prompting.hpp"
#include "instrind/report.hpp"
#include "instrind/scoring.hpp"
#include "instrind/taskgen.hpp"
#include "instrind/types.hpp"

namespace instrind::cli {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> tasks;
  bool all_tasks = false;
  std::uint64_t seed = 0;
  std::string backend = "oracle";
  std::string exec_backend;
  std::string model;
  std::string exec_model;
  std::string base_url;
  std::string template_path;
  std::string manifest;
  std::string out;
  std::vector<std::string> runs;
  std::string format = "md";
  std::string chart;
  std::string data;
  std::string instructions;
  std::string instructions_dir = "data/instructions";
  std::string references;
  std::string input;
  std::string scorer_cmd;
  std::string cache;
  bool no_cache = false;
  bool refresh = false;
  std::size_t max_in_flight = 4;
  std::size_t n_induction = 100;
  std::size_t n_icl = 100;
  std::string config;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ingest", "gen-data", "verify-icl", "induce", "exec-acc",
                                              "ref-score", "tally",   "report",     "score"};
  return names;
}

namespace detail {

inline void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--task", o.tasks, "Task id (repeatable)");
  app.add_flag("--all-tasks", o.all_tasks, "Run every task");
  app.add_option("--seed", o.seed, "Root seed for all randomness");
  app.add_option("--backend", o.backend, "oracle | gold | http");
  app.add_option("--exec-backend", o.exec_backend, "Execution backend (default: --backend)");
  app.add_option("--model", o.model, "Model name sent to the backend");
  app.add_option("--exec-model", o.exec_model, "Execution model name (default: --model)");
  app.add_option("--base-url", o.base_url, "HTTP backend base URL");
  app.add_option("--template", o.template_path, "Induction template JSON file");
  app.add_option("--manifest", o.manifest, "Source manifest JSON");
  app.add_option("--out", o.out, "Output directory (run commands) or file (report, score)");
  app.add_option("--runs", o.runs, "Run directories for report");
  app.add_option("--format", o.format, "Report format: md | csv");
  app.add_option("--chart", o.chart, "Write bar-chart data CSV to this file");
  app.add_option("--data", o.data, "Directory of <task>.jsonl datasets from gen-data");
  app.add_option("--instructions", o.instructions, "Instruction file, or directory of <task>.txt");
  app.add_option("--instructions-dir", o.instructions_dir, "Gold instruction directory for the gold backend");
  app.add_option("--references", o.references, "Directory of references/<task>.txt files");
  app.add_option("--input", o.input, "Input JSONL for score");
  app.add_option("--scorer-cmd", o.scorer_cmd, "External pair scorer command for ref-score");
  app.add_option("--cache", o.cache, "Response cache file (default: <out>/cache.jsonl)");
  app.add_flag("--no-cache", o.no_cache, "Disable the response cache");
  app.add_flag("--refresh", o.refresh, "Bypass cache reads, log nondeterminism");
  app.add_option("--max-in-flight", o.max_in_flight, "Concurrent backend calls")->check(CLI::PositiveNumber);
  app.add_option("--n-induction", o.n_induction, "Induction examples per task")->check(CLI::PositiveNumber);
  app.add_option("--n-icl", o.n_icl, "In-context verification trials per task")->check(CLI::PositiveNumber);
  app.add_option("--config", o.config, "JSON config file; flags override it");
  for (const auto& name : command_names()) app.add_subcommand(name);
}

/// Turns config-file keys the user did not pass as flags into extra
/// arguments, so flags > config > defaults.
inline std::vector<std::string> config_args(const CLI::App& app, const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCategory::usage, "config " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorCategory::usage, "config " + path.string() + ": expected a JSON object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : doc.items()) {
    const CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      fail(ErrorCategory::usage, "config " + path.string() + ": unknown key '" + key + "'");
    }
    if (key == "config") fail(ErrorCategory::usage, "config files cannot include other configs");
    if (opt->count() > 0) continue;
    auto scalar = [&](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back("--" + key);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back("--" + key);
        extra.push_back(scalar(v));
      }
    } else {
      extra.push_back("--" + key);
      extra.push_back(scalar(value));
    }
  }
  return extra;
}

inline std::vector<TaskId> selected_tasks(const Options& o) {
  if (o.all_tasks && !o.tasks.empty()) fail(ErrorCategory::usage, "use either --task or --all-tasks");
  if (o.all_tasks) return {kAllTasks.begin(), kAllTasks.end()};
  if (o.tasks.empty()) fail(ErrorCategory::usage, "missing --task (or --all-tasks)");
  std::vector<TaskId> out;
  for (const auto& t : o.tasks) out.push_back(parse_task(t));
  return out;
}

inline void require(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) fail(ErrorCategory::usage, command + " requires " + flag);
}

inline corpus::SourceManifest manifest_of(const Options& o) {
  if (o.manifest.empty()) return {};
  if (!fs::exists(o.manifest)) fail(ErrorCategory::missing_source, "manifest " + o.manifest + " not found");
  return corpus::SourceManifest::load(o.manifest);
}

inline TaskDataset dataset_for(const Options& o, TaskId task) {
  if (!o.data.empty()) {
    const auto path = fs::path(o.data) / (std::string(task_name(task)) + ".jsonl");
    if (!fs::exists(path)) fail(ErrorCategory::missing_source, "dataset " + path.string() + " not found");
    return taskgen::import_dataset(path);
  }
  return taskgen::generate_task(task, manifest_of(o), o.seed);
}

inline std::string gold_instruction(const Options& o, TaskId task) {
  const auto path = fs::path(o.instructions_dir) / (std::string(task_name(task)) + ".txt");
  if (!fs::exists(path)) fail(ErrorCategory::missing_source, "gold instruction file " + path.string() + " not found");
  const auto lines = eval::parse_instruction_lines(read_file(path));
  if (lines.empty()) fail(ErrorCategory::data, path.string() + ": no instruction");
  return lines.front();
}

inline std::unique_ptr<model::CompletionBackend> make_backend(const Options& o, const std::string& kind, TaskId task,
                                                              const TaskDataset& ds) {
  if (kind == "oracle") return std::make_unique<model::OracleBackend>(task, std::vector<TaskDataset>{ds});
  if (kind == "gold") return std::make_unique<model::ScriptedBackend>(gold_instruction(o, task), "gold");
  if (kind == "http") return std::make_unique<model::HttpBackend>(model::HttpBackendConfig{model::resolve_base_url(o.base_url)});
  fail(ErrorCategory::usage, "unknown backend '" + kind + "' (expected oracle, gold or http)");
}

inline std::unique_ptr<model::ResponseCache> make_cache(const Options& o) {
  if (o.no_cache) return nullptr;
  const fs::path path = o.cache.empty() ? fs::path(o.out) / "cache.jsonl" : fs::path(o.cache);
  return std::make_unique<model::ResponseCache>(path);
}

inline eval::RunConfig run_config(const Options& o, const std::vector<TaskId>& tasks) {
  eval::RunConfig c;
  c.tasks = tasks;
  c.backend = o.backend;
  c.exec_backend = o.exec_backend;
  c.model = o.model;
  c.exec_model = o.exec_model;
  c.n_induction = o.n_induction;
  c.n_icl = o.n_icl;
  c.seed = o.seed;
  c.max_in_flight = o.max_in_flight;
  c.out_dir = o.out;
  if (!o.template_path.empty()) c.induction_template = prompting::load_template(o.template_path).name;
  return c;
}

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
  return buf;
}

inline std::vector<std::string> instructions_for(const Options& o, TaskId task) {
  if (o.instructions.empty()) return eval::induced_instructions(o.out, task);
  fs::path path = o.instructions;
  if (fs::is_directory(path)) path /= std::string(task_name(task)) + ".txt";
  if (!fs::exists(path)) fail(ErrorCategory::missing_source, "instruction file " + path.string() + " not found");
  auto lines = eval::parse_instruction_lines(read_file(path));
  if (lines.empty()) fail(ErrorCategory::data, path.string() + ": no instructions");
  return lines;
}

// ================================================================ commands

inline int cmd_ingest(const Options& o, std::ostream& out) {
  require(o.manifest, "--manifest", "ingest");
  const auto m = manifest_of(o);
  std::vector<std::string> ids;
  for (const auto& [id, _] : m.entries()) ids.push_back(id);
  m.verify(ids);
  out << "verified " << ids.size() << " sources\n";
  auto emit = [&](const char* name, const std::string& body) {
    if (!o.out.empty()) write_file(fs::path(o.out) / name, body);
  };
  if (m.has(corpus::source::freq) && m.has(corpus::source::nouns)) {
    const auto cen = corpus::load_cen(m);
    out << "cen: " << cen.size() << " nouns\n";
    emit("cen.jsonl", corpus::cen_to_jsonl(cen));
    if (m.has(corpus::source::mass_nouns)) {
      const auto plurals = corpus::load_plural_pairs(m);
      out << "plural pairs: " << plurals.size() << "\n";
      emit("plural_pairs.jsonl", corpus::plural_pairs_to_jsonl(plurals));
    }
  }
  if (m.has(corpus::source::cmudict) && m.has(corpus::source::lexicon)) {
    const auto groups = corpus::load_rhyme_groups(m);
    out << "rhyme groups: " << groups.groups.size() << " (" << groups.index.size() << " words; "
        << groups.missing.size() << " missing from dictionary, " << groups.unstressed.size() << " without stress)\n";
    emit("rhyme_groups.jsonl", corpus::rhyme_groups_to_jsonl(groups));
  }
  return 0;
}

inline int cmd_gen_data(const Options& o, std::ostream& out) {
  require(o.out, "--out", "gen-data");
  const auto tasks = selected_tasks(o);
  const auto m = manifest_of(o);
  for (auto t : tasks) {
    const auto ds = taskgen::generate_task(t, m, o.seed);
    taskgen::export_dataset(ds, fs::path(o.out) / (std::string(task_name(t)) + ".jsonl"));
    out << task_name(t) << ": " << ds.induce.size() << " induce, " << ds.execute.size() << " execute\n";
  }
  return 0;
}

inline int cmd_verify_icl(const Options& o, std::ostream& out, std::ostream& err) {
  require(o.out, "--out", "verify-icl");
  const auto tasks = selected_tasks(o);
  const auto cache = make_cache(o);
  const auto kind = o.exec_backend.empty() ? o.backend : o.exec_backend;
  for (auto t : tasks) {
    const auto ds = dataset_for(o, t);
    auto cfg = run_config(o, tasks);
    if (cfg.n_icl > ds.execute.size()) {
      err << "warning: " << task_name(t) << ": only " << ds.execute.size() << " execute items, running "
          << ds.execute.size() << " trials\n";
      cfg.n_icl = ds.execute.size();
    }
    auto backend = make_backend(o, kind, t, ds);
    model::CompletionClient client(*backend, cache.get());
    client.set_refresh(o.refresh);
    eval::RunLog log;
    const auto s = eval::run_icl_verification(ds, client, cfg, &log);
    eval::persist(o.out, "icl", t, log, eval::score_to_json(s), cfg);
    out << task_name(t) << ": icl accuracy " << pct(s.mean) << " (" << s.n_items << " trials, " << s.failures
        << " failures)\n";
  }
  return 0;
}

inline int cmd_induce(const Options& o, std::ostream& out) {
  require(o.out, "--out", "induce");
  const auto tasks = selected_tasks(o);
  const auto cache = make_cache(o);
  const auto tpl = o.template_path.empty() ? prompting::default_induction_template()
                                           : prompting::load_template(o.template_path);
  for (auto t : tasks) {
    const auto ds = dataset_for(o, t);
    const auto cfg = run_config(o, tasks);
    const auto examples = taskgen::sample_induction_examples(ds, cfg.n_induction, cfg.seed);
    auto backend = make_backend(o, o.backend, t, ds);
    model::CompletionClient client(*backend, cache.get());
    client.set_refresh(o.refresh);
    eval::RunLog log;
    const auto res = eval::run_induction(t, examples, client, cfg, tpl, &log);
    eval::persist(o.out, "induce", t, log, eval::induction_summary(res), cfg);
    const auto tally = eval::tally_instructions(res.raw);
    out << task_name(t) << ": " << res.raw.size() << " instructions, " << tally.size() << " distinct, "
        << res.failures << " failures\n";
  }
  return 0;
}

inline int cmd_exec_acc(const Options& o, std::ostream& out) {
  require(o.out, "--out", "exec-acc");
  const auto tasks = selected_tasks(o);
  const auto cache = make_cache(o);
  const auto kind = o.exec_backend.empty() ? o.backend : o.exec_backend;
  for (auto t : tasks) {
    const auto ds = dataset_for(o, t);
    const auto cfg = run_config(o, tasks);
    const auto instructions = instructions_for(o, t);
    auto backend = make_backend(o, kind, t, ds);
    model::CompletionClient client(*backend, cache.get());
    client.set_refresh(o.refresh);
    eval::RunLog log;
    const auto s = eval::run_execution_accuracy(ds, instructions, client, cfg, &log);
    eval::persist(o.out, "exec", t, log, eval::score_to_json(s), cfg);
    out << task_name(t) << ": execution accuracy " << pct(s.mean) << " (" << instructions.size()
        << " instructions x " << ds.execute.size() << " items, " << s.failures << " failures)\n";
  }
  return 0;
}

inline int cmd_ref_score(const Options& o, std::ostream& out) {
  require(o.references, "--references", "ref-score");
  require(o.out, "--out", "ref-score");
  const auto tasks = selected_tasks(o);
  for (auto t : tasks) {
    const auto candidates = instructions_for(o, t);
    const auto refs = eval::load_references(o.references, t);
    const auto scores = o.scorer_cmd.empty()
                            ? eval::score_against_references(candidates, refs)
                            : eval::score_against_references(candidates, refs, eval::external_scorer(o.scorer_cmd));
    eval::TaskScore s;
    s.task = t;
    s.per_instruction = scores;
    s.mean = eval::mean_of(scores);
    s.n_items = scores.size();
    eval::persist(o.out, "ref", t, {}, eval::score_to_json(s), run_config(o, tasks));
    out << task_name(t) << ": reference score " << pct(s.mean) << " (" << candidates.size() << " candidates, "
        << refs.size() << " references)\n";
  }
  return 0;
}

inline int cmd_tally(const Options& o, std::ostream& out) {
  if (o.instructions.empty()) require(o.out, "--out or --instructions", "tally");
  for (auto t : selected_tasks(o)) {
    const auto instructions = instructions_for(o, t);
    out << "# " << task_name(t) << " (" << instructions.size() << ")\n";
    for (const auto& [text, count] : eval::tally_instructions(instructions)) out << count << "\t" << text << "\n";
  }
  return 0;
}

inline int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.runs.empty()) fail(ErrorCategory::usage, "report requires --runs");
  const auto fmt = report::parse_format(o.format);
  std::vector<fs::path> runs(o.runs.begin(), o.runs.end());
  const auto table = report::build_report(runs);
  for (const auto& w : table.warnings) err << "warning: " << w << "\n";
  const auto doc = report::render(table, fmt);
  if (o.out.empty()) out << doc;
  else write_file(o.out, doc);
  if (!o.chart.empty()) write_file(o.chart, report::chart_data(table));
  return 0;
}

/// Rows {"task" or "metric", "prediction", "gold": str | [str]} -> {"index","score"}.
inline int cmd_score(const Options& o, std::ostream& out) {
  require(o.input, "--input", "score");
  std::string body;
  std::size_t index = 0;
  for (const auto& row : eval::read_jsonl(o.input)) {
    MetricKind kind{};
    if (row.contains("metric")) kind = parse_metric(row["metric"].get<std::string>());
    else if (row.contains("task")) kind = metric_for(parse_task(row["task"].get<std::string>()));
    else fail(ErrorCategory::data, o.input + ": row " + std::to_string(index + 1) + " needs task or metric");
    Demonstration d;
    d.input = row.value("input", "-");
    try {
      const auto& g = row.at("gold");
      if (g.is_string()) d.gold = {g.get<std::string>()};
      else d.gold = g.get<std::vector<std::string>>();
      validate(d);
      const auto s = scoring::score(kind, row.at("prediction").get<std::string>(), d);
      body += json{{"index", index}, {"score", s}}.dump() + "\n";
    } catch (const json::exception& e) {
      fail(ErrorCategory::data, o.input + ": row " + std::to_string(index + 1) + ": " + e.what());
    }
    ++index;
  }
  if (o.out.empty()) out << body;
  else write_file(o.out, body);
  return 0;
}

}  // namespace detail

inline int exit_code_for(ErrorCategory c) { return c == ErrorCategory::usage ? 2 : 1; }

inline int dispatch(const CLI::App& app, const Options& o, std::ostream& out, std::ostream& err) {
  std::string name;
  for (const auto* sub : app.get_subcommands()) name = sub->get_name();
  try {
    if (name == "ingest") return detail::cmd_ingest(o, out);
    if (name == "gen-data") return detail::cmd_gen_data(o, out);
    if (name == "verify-icl") return detail::cmd_verify_icl(o, out, err);
    if (name == "induce") return detail::cmd_induce(o, out);
    if (name == "exec-acc") return detail::cmd_exec_acc(o, out);
    if (name == "ref-score") return detail::cmd_ref_score(o, out);
    if (name == "tally") return detail::cmd_tally(o, out);
    if (name == "report") return detail::cmd_report(o, out, err);
    if (name == "score") return detail::cmd_score(o, out);
    fail(ErrorCategory::usage, "unknown command '" + name + "'");
  } catch (const Error& e) {
    err << "error: " << category_name(e.category()) << ": " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

/// Parses argv-style arguments (args[0] is the program name) and runs the
/// chosen command. Exit codes: 0 success, 1 run failure, 2 usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  auto parse = [](CLI::App& app, std::vector<std::string> a) {
    std::reverse(a.begin(), a.end());
    if (!a.empty()) a.pop_back();  // program name
    app.parse(a);
  };
  Options o;
  auto app = std::make_unique<CLI::App>("Instruction induction benchmark harness", "instrind");
  detail::build_app(*app, o);
  try {
    parse(*app, args);
    if (!o.config.empty()) {
      if (!fs::exists(o.config)) fail(ErrorCategory::usage, "config " + o.config + " not found");
      const auto extra = detail::config_args(*app, o.config);
      if (!extra.empty()) {
        auto full = args;
        full.insert(full.end(), extra.begin(), extra.end());
        o = Options{};
        app = std::make_unique<CLI::App>("Instruction induction benchmark harness", "instrind");
        detail::build_app(*app, o);
        parse(*app, full);
      }
    }
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << category_name(e.category()) << ": " << e.what() << "\n";
    return exit_code_for(e.category());
  }
  return dispatch(*app, o, out, err);
}

}  // namespace instrind::cli

#endif  // INSTRIND_CLI_HPP
