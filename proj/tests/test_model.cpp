#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "instrind/http_backend.hpp"
#include "instrind/model.hpp"
#include "instrind/prompting.hpp"
#include "test_support.hpp"

using namespace instrind;
using namespace instrind::model;
using testsupport::TempDir;

namespace {

/// Echoes the prompt length, counting calls and peak concurrency.
class CountingBackend : public CompletionBackend {
 public:
  explicit CountingBackend(int delay_ms = 0) : delay_ms_(delay_ms) {}
  std::string id() const override { return "counting"; }
  std::string complete(const CompletionRequest& req) override {
    const int now = in_flight_.fetch_add(1) + 1;
    int peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
    if (delay_ms_) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
    calls_.fetch_add(1);
    in_flight_.fetch_sub(1);
    return "len=" + std::to_string(req.prompt.size());
  }
  int calls() const { return calls_.load(); }
  int peak() const { return peak_.load(); }

 private:
  int delay_ms_;
  std::atomic<int> in_flight_{0}, peak_{0}, calls_{0};
};

/// Fails the first `failures` calls with the given error.
class FlakyBackend : public CompletionBackend {
 public:
  FlakyBackend(int failures, bool retryable, std::optional<long> retry_after = {})
      : failures_(failures), retryable_(retryable), retry_after_(retry_after) {}
  std::string id() const override { return "flaky"; }
  std::string complete(const CompletionRequest&) override {
    if (calls_++ < failures_) throw BackendError("boom", retryable_, retry_after_);
    return "ok";
  }
  int calls() const { return calls_; }

 private:
  int failures_;
  bool retryable_;
  std::optional<long> retry_after_;
  int calls_ = 0;
};

CompletionRequest req(std::string prompt) {
  CompletionRequest r;
  r.prompt = std::move(prompt);
  r.stop = {kExecutionStop};
  return r;
}

Sleeper recording(std::vector<long>& delays) {
  return [&delays](long ms) { delays.push_back(ms); };
}

}  // namespace

TEST(CacheKey, EveryFieldMatters) {
  const auto base = req("p");
  const auto k = cache_key("b", base);
  EXPECT_EQ(k, cache_key("b", req("p")));
  EXPECT_NE(k, cache_key("c", base));
  auto r = base;
  r.prompt = "q";
  EXPECT_NE(k, cache_key("b", r));
  r = base;
  r.max_tokens = 64;
  EXPECT_NE(k, cache_key("b", r));
  r = base;
  r.temperature = 0.7;
  EXPECT_NE(k, cache_key("b", r));
  r = base;
  r.stop = {};
  EXPECT_NE(k, cache_key("b", r));
  r = base;
  r.model_name = "m";
  EXPECT_NE(k, cache_key("b", r));
}

TEST(Cache, SecondCallIsServedFromCache) {
  TempDir dir;
  CountingBackend backend;
  ResponseCache cache(dir / "cache.jsonl");
  CompletionClient client(backend, &cache);
  const auto first = client.complete(req("hello"));
  const auto second = client.complete(req("hello"));
  EXPECT_FALSE(first.cached);
  EXPECT_TRUE(second.cached);
  EXPECT_EQ(first.text, second.text);
  EXPECT_EQ(backend.calls(), 1);
  EXPECT_EQ(client.cache_hits(), 1u);
}

TEST(Cache, SurvivesRestart) {
  TempDir dir;
  CountingBackend backend;
  {
    ResponseCache cache(dir / "cache.jsonl");
    CompletionClient client(backend, &cache);
    client.complete(req("a"));
    client.complete(req("b"));
  }
  ResponseCache reopened(dir / "cache.jsonl");
  EXPECT_EQ(reopened.size(), 2u);
  CompletionClient client(backend, &reopened);
  EXPECT_EQ(client.complete(req("a")).text, "len=1");
  EXPECT_EQ(backend.calls(), 2);
}

TEST(Cache, TornTrailingLineIsSkipped) {
  TempDir dir;
  CountingBackend backend;
  {
    ResponseCache cache(dir / "cache.jsonl");
    CompletionClient(backend, &cache).complete(req("a"));
  }
  {
    std::ofstream out(dir / "cache.jsonl", std::ios::app);
    out << R"({"key":"abc","text":"tr)";
  }
  ResponseCache reopened(dir / "cache.jsonl");
  EXPECT_EQ(reopened.size(), 1u);
}

TEST(Cache, RefreshBypassesReadsButRecords) {
  TempDir dir;
  CountingBackend backend;
  ResponseCache cache(dir / "cache.jsonl");
  CompletionClient client(backend, &cache);
  client.complete(req("a"));
  client.set_refresh(true);
  EXPECT_FALSE(client.complete(req("a")).cached);
  EXPECT_EQ(backend.calls(), 2);
  EXPECT_EQ(lines_of(read_file(dir / "cache.jsonl")).size(), 2u);
}

TEST(Retry, BackoffDoublesAndCaps) {
  RetryPolicy p;
  EXPECT_EQ(backoff_delay_ms(p, 0), 500);
  EXPECT_EQ(backoff_delay_ms(p, 1), 1000);
  EXPECT_EQ(backoff_delay_ms(p, 3), 4000);
  EXPECT_EQ(backoff_delay_ms(p, 20), 30000);
}

TEST(Retry, TransientFailuresAreRetried) {
  FlakyBackend backend(3, true);
  std::vector<long> delays;
  CompletionClient client(backend, nullptr, {}, recording(delays));
  EXPECT_EQ(client.complete(req("x")).text, "ok");
  EXPECT_EQ(backend.calls(), 4);
  EXPECT_EQ(delays, (std::vector<long>{500, 1000, 2000}));
}

TEST(Retry, RetryAfterOverridesBackoff) {
  FlakyBackend backend(1, true, 7000);
  std::vector<long> delays;
  CompletionClient client(backend, nullptr, {}, recording(delays));
  client.complete(req("x"));
  EXPECT_EQ(delays, std::vector<long>{7000});
}

TEST(Retry, GivesUpAfterMaxAttempts) {
  FlakyBackend backend(100, true);
  std::vector<long> delays;
  CompletionClient client(backend, nullptr, {}, recording(delays));
  try {
    client.complete(req("x"));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.category(), ErrorCategory::backend);
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_EQ(backend.calls(), 5);
  EXPECT_EQ(delays.size(), 4u);
}

TEST(Retry, PermanentFailureIsNotRetried) {
  FlakyBackend backend(1, false);
  std::vector<long> delays;
  CompletionClient client(backend, nullptr, {}, recording(delays));
  EXPECT_THROW(client.complete(req("x")), BackendError);
  EXPECT_EQ(backend.calls(), 1);
  EXPECT_TRUE(delays.empty());
}

TEST(Parallel, InFlightNeverExceedsLimit) {
  for (std::size_t limit : {1u, 2u, 4u}) {
    CountingBackend backend(5);
    CompletionClient client(backend);
    std::vector<CompletionRequest> reqs;
    for (int i = 0; i < 24; ++i) reqs.push_back(req(std::string(static_cast<std::size_t>(i), 'x')));
    const auto out = client.complete_all(reqs, limit);
    EXPECT_LE(backend.peak(), static_cast<int>(limit));
    ASSERT_EQ(out.size(), reqs.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      ASSERT_TRUE(out[i].ok());
      EXPECT_EQ(out[i].response->text, "len=" + std::to_string(i));
    }
  }
}

TEST(Parallel, FailuresAreReportedPerRequest) {
  FlakyBackend backend(1, false);
  CompletionClient client(backend);
  const auto out = client.complete_all({req("a"), req("b")}, 1);
  EXPECT_FALSE(out[0].ok());
  EXPECT_NE(out[0].error.find("boom"), std::string::npos);
  EXPECT_TRUE(out[1].ok());
}

TEST(Oracle, AnswersByRule) {
  EXPECT_EQ(solve(TaskId::sum, "22 10"), "32");
  EXPECT_EQ(solve(TaskId::diff, "32 22"), "10");
  EXPECT_EQ(solve(TaskId::first_letter, "cat"), "c");
  EXPECT_EQ(solve(TaskId::list_letters, "cat"), "c a t");
  EXPECT_EQ(solve(TaskId::num_to_word, "26"), "twenty-six");
  EXPECT_EQ(solve(TaskId::pluralization, "child"), "children");
  EXPECT_EQ(solve(TaskId::starting_with, "The man ate a mango. [m]"), "man, mango");
  EXPECT_EQ(solve(TaskId::sum, "22 ten"), "");
  EXPECT_EQ(solve(TaskId::sum, "garbage"), "");
  EXPECT_EQ(solve(TaskId::antonyms, "hot"), "");
}

TEST(Oracle, BackendReadsFinalInputBlock) {
  OracleBackend oracle(TaskId::sum);
  EXPECT_EQ(oracle.id(), "oracle/sum");
  CompletionRequest r;
  r.prompt = prompting::render_execution_prompt("Add the numbers.", "22 10").text;
  EXPECT_EQ(oracle.complete(r), " 32");
  r.prompt = "not a prompt";
  EXPECT_EQ(oracle.complete(r), "");
}

TEST(Oracle, KnownDatasetsCoverRulelessTasks) {
  TaskDataset ds;
  ds.task = TaskId::antonyms;
  ds.execute.push_back(taskgen::demo("hot", "cold"));
  OracleBackend oracle(TaskId::antonyms, {ds});
  CompletionRequest r;
  r.prompt = prompting::render_execution_prompt("Give the opposite.", "hot").text;
  EXPECT_EQ(oracle.complete(r), " cold");
}

class HttpBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/completions", [this](const httplib::Request& rq, httplib::Response& rs) {
      const int n = hits_.fetch_add(1);
      last_auth_ = rq.get_header_value("Authorization");
      last_body_ = rq.body;
      if (mode_ == "429" && n == 0) {
        rs.status = 429;
        rs.set_header("Retry-After", "2");
        return;
      }
      if (mode_ == "400") {
        rs.status = 400;
        rs.set_content("bad request", "text/plain");
        return;
      }
      if (mode_ == "garbage") {
        rs.set_content("{\"nope\":1}", "application/json");
        return;
      }
      rs.set_content(R"({"choices":[{"text":" 32"}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  HttpBackend backend() {
    HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port_);
    cfg.api_key_env = "INSTRIND_TEST_KEY";
    cfg.timeout_s = 5;
    return HttpBackend(cfg);
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::string mode_ = "ok";
  std::atomic<int> hits_{0};
  std::string last_auth_, last_body_;
};

TEST_F(HttpBackendTest, ReturnsFirstChoiceText) {
  ::setenv("INSTRIND_TEST_KEY", "secret", 1);
  auto b = backend();
  auto r = req("Input: 22 10\nOutput:");
  r.model_name = "m1";
  EXPECT_EQ(b.complete(r), " 32");
  EXPECT_EQ(last_auth_, "Bearer secret");
  const auto body = json::parse(last_body_);
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["max_tokens"], kExecutionMaxTokens);
  EXPECT_EQ(body["stop"], json::array({kExecutionStop}));
  ::unsetenv("INSTRIND_TEST_KEY");
}

TEST_F(HttpBackendTest, RateLimitIsRetriedAfterTheAdvertisedDelay) {
  mode_ = "429";
  auto b = backend();
  std::vector<long> delays;
  CompletionClient client(b, nullptr, {}, recording(delays));
  EXPECT_EQ(client.complete(req("x")).text, " 32");
  EXPECT_EQ(delays, std::vector<long>{2000});
  EXPECT_EQ(hits_.load(), 2);
}

TEST_F(HttpBackendTest, ClientErrorIsNotRetried) {
  mode_ = "400";
  auto b = backend();
  std::vector<long> delays;
  CompletionClient client(b, nullptr, {}, recording(delays));
  EXPECT_THROW(client.complete(req("x")), BackendError);
  EXPECT_EQ(hits_.load(), 1);
  EXPECT_TRUE(delays.empty());
}

TEST_F(HttpBackendTest, MalformedBodyIsABackendError) {
  mode_ = "garbage";
  auto b = backend();
  try {
    b.complete(req("x"));
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_FALSE(e.retryable());
  }
}

TEST(HttpConfig, BaseUrlFallsBackToEnvironment) {
  ::unsetenv(kBaseUrlEnv);
  EXPECT_EQ(resolve_base_url("http://x"), "http://x");
  EXPECT_THROW(resolve_base_url(""), Error);
  ::setenv(kBaseUrlEnv, "http://env", 1);
  EXPECT_EQ(resolve_base_url(""), "http://env");
  ::unsetenv(kBaseUrlEnv);
  EXPECT_EQ(parse_retry_after("1.5"), 1500);
  EXPECT_FALSE(parse_retry_after("Wed, 21 Oct 2015").has_value());
}
