#include <gtest/gtest.h>

#include <sstream>

#include "instrind/cli.hpp"
#include "instrind/report.hpp"
#include "test_support.hpp"

using namespace instrind;
using nlohmann::json;
using testsupport::TempDir;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "instrind");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string manifest() { return testsupport::manifest_path().string(); }
std::string gold_dir() { return (testsupport::source_dir() / "data" / "instructions").string(); }

void write_summary(const std::filesystem::path& dir, const json& tasks) {
  std::filesystem::create_directories(dir);
  write_file(dir / "summary.json", json{{"tasks", tasks}}.dump(2));
}

json score_entry(const std::string& task, double mean, std::size_t n = 100, std::size_t failures = 0) {
  return json{{"task", task}, {"per_instruction", {mean}}, {"mean", mean}, {"n_items", n}, {"failures", failures}};
}

}  // namespace

TEST(Cli, GenDataWritesFullArithmeticDataset) {
  TempDir dir;
  const auto r = run({"gen-data", "--task", "sum", "--seed", "3", "--manifest", manifest(), "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(read_file(dir / "sum.jsonl")).size(), 10000u);
  EXPECT_NE(r.out.find("sum: 9900 induce, 100 execute"), std::string::npos) << r.out;
}

TEST(Cli, GoldInductionThenOracleExecutionScoresPerfectly) {
  TempDir dir;
  const auto out = dir.path().string();
  auto r = run({"induce", "--task", "sum", "--task", "first_letter", "--backend", "gold", "--instructions-dir",
                gold_dir(), "--manifest", manifest(), "--n-induction", "5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"exec-acc", "--task", "sum", "--task", "first_letter", "--backend", "oracle", "--manifest", manifest(),
           "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = json::parse(read_file(dir / "summary.json"));
  EXPECT_DOUBLE_EQ(summary["tasks"]["sum"]["exec"]["mean"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(summary["tasks"]["first_letter"]["exec"]["mean"].get<double>(), 1.0);
  EXPECT_EQ(summary["tasks"]["sum"]["induce"]["instructions"].size(), 5u);
  EXPECT_TRUE(std::filesystem::exists(dir / "cache.jsonl"));

  r = run({"report", "--runs", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| sum |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("100.0"), std::string::npos);
}

TEST(Cli, SecondRunIsServedFromCache) {
  TempDir dir;
  const std::vector<std::string> args{"verify-icl", "--task", "diff", "--n-icl", "10", "--manifest", manifest(),
                                      "--out", dir.path().string()};
  ASSERT_EQ(run(args).code, 0);
  const auto first = read_file(dir / "summary.json");
  const auto cache_lines = lines_of(read_file(dir / "cache.jsonl")).size();
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read_file(dir / "summary.json"), first);
  EXPECT_EQ(lines_of(read_file(dir / "cache.jsonl")).size(), cache_lines);
}

TEST(Cli, ExitCodesByErrorCategory) {
  auto r = run({"gen-data", "--task", "frist_letter", "--out", "/tmp/x"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error: usage:"), std::string::npos);
  EXPECT_NE(r.err.find("first_letter"), std::string::npos);
  EXPECT_EQ(run({"report", "--runs", "/nonexistent/run"}).code, 1);
  EXPECT_EQ(run({"--bogus-flag"}).code, 2);
  EXPECT_EQ(run({"verify-icl", "--task", "sum"}).code, 2);
  r = run({"ingest", "--manifest", "/nonexistent/manifest.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing_source"), std::string::npos);
}

TEST(Cli, ConfigFileFillsUnsetFlagsOnly) {
  TempDir dir;
  write_file(dir / "cfg.json", json{{"task", {"sum"}}, {"seed", 9}, {"manifest", manifest()},
                                    {"out", (dir / "from_config").string()}}
                                   .dump());
  auto r = run({"gen-data", "--config", (dir / "cfg.json").string(), "--out", (dir / "from_flag").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "from_flag" / "sum.jsonl"));
  EXPECT_FALSE(std::filesystem::exists(dir / "from_config"));
  const auto ds = taskgen::import_dataset(dir / "from_flag" / "sum.jsonl");
  EXPECT_EQ(ds.seed, 9u);

  write_file(dir / "bad.json", R"({"colour":"red"})");
  r = run({"gen-data", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Cli, ScoreCommandAppliesTaskMetrics) {
  TempDir dir;
  write_file(dir / "rows.jsonl",
             R"({"task":"synonyms","prediction":"supposed, assumed","gold":"supposed"})"
             "\n"
             R"({"metric":"unigram_f1","prediction":"they all involve oscillations","gold":["involve oscillations"]})"
             "\n"
             R"({"task":"membership","prediction":"man, me","gold":"me, man"})"
             "\n");
  const auto r = run({"score", "--input", (dir / "rows.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_DOUBLE_EQ(json::parse(lines[0])["score"].get<double>(), 1.0);
  EXPECT_NEAR(json::parse(lines[1])["score"].get<double>(), 2.0 / 3, 1e-12);
  EXPECT_DOUBLE_EQ(json::parse(lines[2])["score"].get<double>(), 1.0);
}

TEST(Cli, RefScoreAndTally) {
  TempDir dir;
  write_file(dir / "cands.txt", "write the first letter\nWrite the first letter.\n");
  std::filesystem::create_directories(dir / "refs");
  write_file(dir / "refs" / "first_letter.txt",
             "extract the first letter of the input word\nwrite the first letter of each word\n");
  auto r = run({"ref-score", "--task", "first_letter", "--instructions", (dir / "cands.txt").string(), "--references",
                (dir / "refs").string(), "--out", (dir / "run").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = json::parse(read_file(dir / "run" / "summary.json"));
  EXPECT_NEAR(summary["tasks"]["first_letter"]["ref"]["mean"].get<double>(), 8.0 / 11, 1e-12);

  r = run({"tally", "--task", "first_letter", "--instructions", (dir / "cands.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("2\twrite the first letter"), std::string::npos) << r.out;
}

TEST(Report, EmptyRunDirectoryIsAnError) {
  TempDir dir;
  try {
    report::build_report({dir.path()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::io);
  }
}

TEST(Report, SingleTaskFooterEqualsTheRow) {
  TempDir dir;
  write_summary(dir / "run", {{"sum", {{"exec", score_entry("sum", 0.436)}}}});
  const auto t = report::build_report({dir / "run"});
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.columns[0].field, "exec");
  EXPECT_EQ(t.footer[0], t.rows[0].second[0]);
  const auto md = report::render(t, report::Format::md);
  EXPECT_NE(md.find("| sum | 43.6 | 100 | 0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| average | 43.6 |  |  |"), std::string::npos) << md;
}

TEST(Report, MarkdownAndCsvCarryTheSameNumbers) {
  TempDir dir;
  write_summary(dir / "a", {{"sum", {{"exec", score_entry("sum", 1.0)}, {"icl", score_entry("sum", 0.9)}}},
                            {"diff", {{"exec", score_entry("diff", 0.25, 200, 3)}}}});
  const auto t = report::build_report({dir / "a"});
  const auto md = report::render(t, report::Format::md);
  const auto csv = report::render(t, report::Format::csv);
  auto cells = [](const std::string& doc, char sep) {
    std::vector<std::string> out;
    for (const auto& line : lines_of(doc)) {
      if (line.rfind("|---", 0) == 0) continue;
      for (const auto& c : split(line, sep)) {
        const auto v = trim(c);
        if (!v.empty()) out.push_back(v);
      }
    }
    return out;
  };
  EXPECT_EQ(cells(md, '|'), cells(csv, ','));
  EXPECT_NE(csv.find("diff,,25.0,200,3"), std::string::npos) << csv;
  EXPECT_NE(csv.find("average,90.0,62.5,,"), std::string::npos) << csv;
}

TEST(Report, TasksAreUnionedWithAWarning) {
  TempDir dir;
  write_summary(dir / "a", {{"sum", {{"exec", score_entry("sum", 1.0)}}}});
  write_summary(dir / "b", {{"sum", {{"exec", score_entry("sum", 0.5)}}}, {"diff", {{"exec", score_entry("diff", 0.5)}}}});
  const auto t = report::build_report({dir / "a", dir / "b"});
  EXPECT_EQ(t.rows.size(), 2u);
  ASSERT_EQ(t.warnings.size(), 1u);
  EXPECT_NE(t.warnings[0].find("run a lacks tasks: diff"), std::string::npos);
  const auto chart = report::chart_data(t);
  EXPECT_NE(chart.find("b,exec,diff,50.0"), std::string::npos) << chart;
}

TEST(Report, DuplicateRunNamesAreDisambiguated) {
  TempDir one, two;
  write_summary(one / "run", {{"sum", {{"exec", score_entry("sum", 1.0)}}}});
  write_summary(two / "run", {{"sum", {{"exec", score_entry("sum", 0.0)}}}});
  const auto t = report::build_report({one / "run", two / "run"});
  EXPECT_EQ(t.columns[0].run, "run");
  EXPECT_EQ(t.columns[3].run, "run#2");
}
