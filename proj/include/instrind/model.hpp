#ifndef INSTRIND_MODEL_HPP
#define INSTRIND_MODEL_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "instrind/common.hpp"
#include "instrind/number_words.hpp"
#include "instrind/pluralize.hpp"
#include "instrind/prompting.hpp"
#include "instrind/taskgen.hpp"
#include "instrind/types.hpp"

namespace instrind::model {

using nlohmann::json;

inline constexpr int kInductionMaxTokens = 64;
inline constexpr int kExecutionMaxTokens = 32;
inline const std::string kExecutionStop = "\nInput:";

struct CompletionRequest {
  std::string prompt;
  int max_tokens = kExecutionMaxTokens;
  double temperature = 0.0;  // 0 = greedy
  std::vector<std::string> stop;
  std::string model_name;
};

inline json request_to_json(const CompletionRequest& r) {
  return json{{"prompt", r.prompt},
              {"max_tokens", r.max_tokens},
              {"temperature", r.temperature},
              {"stop", r.stop},
              {"model", r.model_name}};
}

struct CompletionResponse {
  std::string text;
  std::string backend;
  bool cached = false;
  long latency_ms = 0;
};

/// Digest over every field that can change a completion.
inline std::string cache_key(const std::string& backend_id, const CompletionRequest& r) {
  const json fields = json::array({backend_id, r.model_name, r.prompt, r.max_tokens, r.temperature, r.stop});
  return sha256_hex(fields.dump());
}

/// Backend failure. Retryable errors are retried by CompletionClient with
/// exponential backoff; retry_after_ms, when set, overrides the delay.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, bool retryable, std::optional<long> retry_after_ms = {})
      : Error(ErrorCategory::backend, what), retryable_(retryable), retry_after_ms_(retry_after_ms) {}

  bool retryable() const noexcept { return retryable_; }
  std::optional<long> retry_after_ms() const noexcept { return retry_after_ms_; }

 private:
  bool retryable_;
  std::optional<long> retry_after_ms_;
};

/// A completion model. Implementations must tolerate concurrent calls.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const CompletionRequest& req) = 0;
};

// ================================================================ oracle

/// Solves a task input directly. Empty when the task has no programmatic
/// rule or the input does not parse.
inline std::string solve(TaskId task, std::string_view raw_input) {
  const std::string input = trim(raw_input);
  try {
    switch (task) {
      case TaskId::first_letter: return input.empty() ? "" : input.substr(0, 1);
      case TaskId::second_letter: return input.size() < 2 ? "" : input.substr(1, 1);
      case TaskId::list_letters: {
        std::vector<std::string> letters;
        for (char c : input) letters.emplace_back(1, c);
        return join(letters, " ");
      }
      case TaskId::sum:
      case TaskId::diff: {
        const auto parts = split_ws(input);
        if (parts.size() != 2) return "";
        std::size_t used_a = 0, used_b = 0;
        const long a = std::stol(parts[0], &used_a);
        const long b = std::stol(parts[1], &used_b);
        if (used_a != parts[0].size() || used_b != parts[1].size()) return "";
        return std::to_string(task == TaskId::sum ? a + b : a - b);
      }
      case TaskId::num_to_word: {
        std::size_t used = 0;
        const long n = std::stol(input, &used);
        if (used != input.size() || n < 0 || n > 999'999) return "";
        return number_to_words(static_cast<std::uint32_t>(n));
      }
      case TaskId::pluralization: return input.empty() ? "" : pluralize(to_lower(input));
      case TaskId::starting_with: {
        const auto open = input.rfind(" [");
        if (open == std::string::npos || input.size() != open + 4 || input.back() != ']') return "";
        const char letter = static_cast<char>(std::tolower(static_cast<unsigned char>(input[open + 2])));
        return join(taskgen::detail::words_starting_with(input.substr(0, open), letter), ", ");
      }
      default: return "";
    }
  } catch (const std::exception&) {
    return "";
  }
}

/// Offline stand-in for an execution model: reads the final Input block of
/// an in-context or execution prompt and answers it by rule, or from the
/// known datasets for tasks without a rule. Never throws.
inline std::string oracle_complete(TaskId task, std::string_view prompt,
                                   const std::unordered_map<std::string, std::string>* known = nullptr) {
  const auto input = prompting::final_input(prompt);
  if (!input) return "";
  if (auto answer = solve(task, *input); !answer.empty()) return answer;
  if (known) {
    auto it = known->find(*input);
    if (it != known->end()) return it->second;
  }
  return "";
}

class OracleBackend : public CompletionBackend {
 public:
  explicit OracleBackend(TaskId task, const std::vector<TaskDataset>& datasets = {}) : task_(task) {
    for (const auto& ds : datasets) {
      for (const auto* split : {&ds.induce, &ds.execute}) {
        for (const auto& d : *split) known_.emplace(d.input, d.first_gold());
      }
    }
  }

  std::string id() const override { return "oracle/" + std::string(task_name(task_)); }

  std::string complete(const CompletionRequest& req) override {
    auto answer = oracle_complete(task_, req.prompt, &known_);
    return answer.empty() ? answer : " " + answer;
  }

 private:
  TaskId task_;
  std::unordered_map<std::string, std::string> known_;
};

/// Returns the same text for every prompt (e.g. a gold instruction when
/// standing in for the inducing model).
class ScriptedBackend : public CompletionBackend {
 public:
  explicit ScriptedBackend(std::string text, std::string name = "scripted")
      : text_(std::move(text)), name_(std::move(name)) {}
  std::string id() const override { return name_; }
  std::string complete(const CompletionRequest&) override { return text_; }

 private:
  std::string text_;
  std::string name_;
};

// ================================================================ cache

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Append-only JSONL store {key, request, text, timestamp} with an
/// in-memory index. Later lines for a key supersede earlier ones.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(path_)) return;
    std::size_t lineno = 0;
    for (const auto& line : lines_of(read_file(path_))) {
      ++lineno;
      if (trim_view(line).empty()) continue;
      try {
        const auto row = json::parse(line);
        index_[row.at("key").get<std::string>()] = row.at("text").get<std::string>();
      } catch (const json::exception&) {
        // a torn final line from an interrupted write
        std::cerr << "warning: cache " << path_.string() << ":" << lineno << ": skipping unreadable entry\n";
      }
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const json& request, const std::string& text) {
    const json row{{"key", key}, {"request", request}, {"text", text}, {"timestamp", utc_timestamp()}};
    std::lock_guard lock(mu_);
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) fail(ErrorCategory::io, "cannot append to cache " + path_.string());
    out << row.dump() << '\n';
    out.flush();
    index_[key] = text;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return index_.size();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> index_;
};

// ================================================================ client

struct RetryPolicy {
  int max_attempts = 5;
  long base_delay_ms = 500;
  long max_delay_ms = 30'000;
};

inline long backoff_delay_ms(const RetryPolicy& p, int attempt) {
  long d = p.base_delay_ms;
  for (int i = 0; i < attempt && d < p.max_delay_ms; ++i) d *= 2;
  return std::min(d, p.max_delay_ms);
}

using Sleeper = std::function<void(long)>;

inline Sleeper real_sleeper() {
  return [](long ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); };
}

struct Outcome {
  std::optional<CompletionResponse> response;
  std::string error;  // set when response is empty

  bool ok() const { return response.has_value(); }
};

/// Cache-fronted access to one backend with retry and bounded fan-out.
class CompletionClient {
 public:
  CompletionClient(CompletionBackend& backend, ResponseCache* cache = nullptr, RetryPolicy retry = {},
                   Sleeper sleeper = real_sleeper())
      : backend_(backend), cache_(cache), retry_(retry), sleeper_(std::move(sleeper)) {}

  /// Skip cache reads but still record, logging any disagreement with a
  /// previously cached greedy completion.
  void set_refresh(bool refresh) { refresh_ = refresh; }

  const CompletionBackend& backend() const { return backend_; }

  CompletionResponse complete(const CompletionRequest& req) {
    const std::string key = cache_key(backend_.id(), req);
    std::optional<std::string> previous;
    if (cache_) {
      previous = cache_->get(key);
      if (previous && !refresh_) {
        cache_hits_.fetch_add(1);
        return {*previous, backend_.id(), true, 0};
      }
    }
    const auto start = std::chrono::steady_clock::now();
    std::string text = call_with_retry(req);
    const long latency = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
    if (previous && *previous != text && req.temperature == 0.0) {
      std::cerr << "warning: backend nondeterminism for cache key " << key.substr(0, 12)
                << ": greedy completion differs from cached text\n";
    }
    if (cache_) cache_->put(key, request_to_json(req), text);
    return {std::move(text), backend_.id(), false, latency};
  }

  /// Completes every request with at most max_in_flight concurrent calls.
  /// Results are indexed like the input regardless of completion order.
  std::vector<Outcome> complete_all(const std::vector<CompletionRequest>& reqs, std::size_t max_in_flight = 1) {
    std::vector<Outcome> out(reqs.size());
    if (reqs.empty()) return out;
    const std::size_t workers = std::clamp<std::size_t>(max_in_flight, 1, reqs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < reqs.size(); i = next.fetch_add(1)) {
        try {
          out[i].response = complete(reqs[i]);
        } catch (const std::exception& e) {
          out[i].error = e.what();
        }
      }
    };
    if (workers == 1) {
      work();
      return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    return out;  // jthreads join on scope exit, before `out` is returned
  }

  std::size_t backend_calls() const { return backend_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::string call_with_retry(const CompletionRequest& req) {
    for (int attempt = 0;; ++attempt) {
      try {
        backend_calls_.fetch_add(1);
        return backend_.complete(req);
      } catch (const BackendError& e) {
        if (!e.retryable() || attempt + 1 >= retry_.max_attempts) {
          throw BackendError(std::string(e.what()) + " (after " + std::to_string(attempt + 1) + " attempt(s))", false);
        }
        sleeper_(e.retry_after_ms().value_or(backoff_delay_ms(retry_, attempt)));
      }
    }
  }

  CompletionBackend& backend_;
  ResponseCache* cache_;
  RetryPolicy retry_;
  Sleeper sleeper_;
  bool refresh_ = false;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace instrind::model

#endif  // INSTRIND_MODEL_HPP
