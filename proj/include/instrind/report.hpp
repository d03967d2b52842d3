#ifndef INSTRIND_REPORT_HPP
#define INSTRIND_REPORT_HPP

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/types.hpp"

namespace instrind::report {

using nlohmann::json;
namespace fs = std::filesystem;

enum class Format { md, csv };

inline Format parse_format(std::string_view s) {
  if (s == "md") return Format::md;
  if (s == "csv") return Format::csv;
  fail(ErrorCategory::usage, "unknown report format '" + std::string(s) + "' (expected md or csv)");
}

inline constexpr std::array<std::string_view, 3> kMetrics = {"icl", "exec", "ref"};

struct Column {
  std::string run;
  std::string field;  // icl, exec, ref, n, failures
  bool is_rate() const { return field != "n" && field != "failures"; }
  std::string header() const { return run + " " + field; }
};

struct ReportTable {
  std::vector<Column> columns;
  std::vector<std::pair<TaskId, std::vector<std::optional<double>>>> rows;
  std::vector<std::optional<double>> footer;  // unweighted means of rate columns
  std::vector<std::string> warnings;
};

/// Value in percent with one decimal ("43.6"); counts as integers.
inline std::string format_cell(const Column& c, const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  if (c.is_rate()) std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
  else std::snprintf(buf, sizeof buf, "%.0f", *v);
  return buf;
}

namespace detail {

struct RunData {
  std::string label;
  std::map<TaskId, std::map<std::string, double>> values;
  std::set<std::string> metrics;
};

inline RunData load_run(const fs::path& dir) {
  const auto path = dir / "summary.json";
  if (!fs::exists(path)) fail(ErrorCategory::io, "run directory " + dir.string() + " has no summary.json");
  json summary;
  try {
    summary = json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCategory::data, path.string() + ": " + e.what());
  }
  RunData run;
  auto label = dir.lexically_normal().filename().string();
  if (label.empty()) label = dir.lexically_normal().parent_path().filename().string();
  run.label = label.empty() ? dir.string() : label;
  if (!summary.contains("tasks") || summary["tasks"].empty()) {
    fail(ErrorCategory::data, path.string() + ": no task results");
  }
  for (const auto& [name, entry] : summary["tasks"].items()) {
    const auto task = parse_task(name);
    auto& v = run.values[task];
    double failures = 0;
    for (auto m : kMetrics) {
      const std::string key(m);
      if (!entry.contains(key)) continue;
      v[key] = entry[key].at("mean").get<double>();
      run.metrics.insert(key);
      failures += entry[key].value("failures", 0.0);
    }
    if (entry.contains("exec")) v["n"] = entry["exec"].at("n_items").get<double>();
    else if (entry.contains("icl")) v["n"] = entry["icl"].at("n_items").get<double>();
    if (entry.contains("induce")) failures += entry["induce"].value("failures", 0.0);
    v["failures"] = failures;
  }
  return run;
}

}  // namespace detail

/// Per-task table over one or more run directories, tasks unioned across
/// runs (blanks where a run lacks a task).
inline ReportTable build_report(const std::vector<fs::path>& runs) {
  if (runs.empty()) fail(ErrorCategory::usage, "report needs at least one run directory");
  std::vector<detail::RunData> data;
  for (const auto& r : runs) data.push_back(detail::load_run(r));
  std::map<std::string, int> seen;
  for (auto& d : data) {
    if (++seen[d.label] > 1) d.label += "#" + std::to_string(seen[d.label]);
  }

  ReportTable t;
  std::set<TaskId> all;
  for (const auto& d : data) {
    for (const auto& [task, _] : d.values) all.insert(task);
  }
  for (const auto& d : data) {
    std::vector<std::string> missing;
    for (auto task : all) {
      if (!d.values.count(task)) missing.emplace_back(task_name(task));
    }
    if (!missing.empty()) t.warnings.push_back("run " + d.label + " lacks tasks: " + join(missing, ", "));
    for (auto m : kMetrics) {
      if (d.metrics.count(std::string(m))) t.columns.push_back({d.label, std::string(m)});
    }
    t.columns.push_back({d.label, "n"});
    t.columns.push_back({d.label, "failures"});
  }
  std::vector<double> sums(t.columns.size(), 0.0);
  std::vector<std::size_t> counts(t.columns.size(), 0);
  for (auto task : all) {
    std::vector<std::optional<double>> cells;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const auto& col = t.columns[c];
      std::optional<double> v;
      for (const auto& d : data) {
        if (d.label != col.run) continue;
        auto it = d.values.find(task);
        if (it != d.values.end()) {
          auto f = it->second.find(col.field);
          if (f != it->second.end()) v = f->second;
        }
      }
      if (v && col.is_rate()) {
        sums[c] += *v;
        ++counts[c];
      }
      cells.push_back(v);
    }
    t.rows.emplace_back(task, std::move(cells));
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c].is_rate() && counts[c]) t.footer.emplace_back(sums[c] / static_cast<double>(counts[c]));
    else t.footer.emplace_back(std::nullopt);
  }
  return t;
}

inline std::string render(const ReportTable& t, Format f) {
  std::vector<std::string> header{"task"};
  for (const auto& c : t.columns) header.push_back(c.header());
  std::vector<std::vector<std::string>> body;
  for (const auto& [task, cells] : t.rows) {
    std::vector<std::string> row{std::string(task_name(task))};
    for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(format_cell(t.columns[c], cells[c]));
    body.push_back(std::move(row));
  }
  std::vector<std::string> footer{"average"};
  for (std::size_t c = 0; c < t.footer.size(); ++c) footer.push_back(format_cell(t.columns[c], t.footer[c]));
  body.push_back(std::move(footer));

  std::string out;
  if (f == Format::csv) {
    out += join(header, ",") + "\n";
    for (const auto& row : body) out += join(row, ",") + "\n";
    return out;
  }
  out += "| " + join(header, " | ") + " |\n";
  out += "|---";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += "|---:";
  out += "|\n";
  for (const auto& row : body) out += "| " + join(row, " | ") + " |\n";
  return out;
}

/// Long-format values for bar charts: run,metric,task,value (percent).
inline std::string chart_data(const ReportTable& t) {
  std::string out = "run,metric,task,value\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const auto& col = t.columns[c];
    if (!col.is_rate()) continue;
    for (const auto& [task, cells] : t.rows) {
      if (cells[c]) out += col.run + "," + col.field + "," + std::string(task_name(task)) + "," + format_cell(col, cells[c]) + "\n";
    }
  }
  return out;
}

inline std::string emit_report(const std::vector<fs::path>& runs, Format f, std::vector<std::string>* warnings = nullptr) {
  const auto t = build_report(runs);
  if (warnings) *warnings = t.warnings;
  return render(t, f);
}

}  // namespace instrind::report

#endif  // INSTRIND_REPORT_HPP
