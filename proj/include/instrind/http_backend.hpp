#ifndef INSTRIND_HTTP_BACKEND_HPP
#define INSTRIND_HTTP_BACKEND_HPP

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <cstdlib>
#include <string>

#include "json.hpp"

#include "instrind/model.hpp"

namespace instrind::model {

inline constexpr const char* kApiKeyEnv = "INSTRIND_API_KEY";
inline constexpr const char* kBaseUrlEnv = "INSTRIND_BASE_URL";

struct HttpBackendConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/completions";
  std::string api_key_env = kApiKeyEnv;
  int timeout_s = 60;
};

/// Base URL from the flag value, else from INSTRIND_BASE_URL.
inline std::string resolve_base_url(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kBaseUrlEnv); env && *env) return env;
  fail(ErrorCategory::usage, std::string("http backend needs --base-url or ") + kBaseUrlEnv);
}

/// Parses a Retry-After header given in seconds.
inline std::optional<long> parse_retry_after(const std::string& value) {
  if (value.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double seconds = std::stod(value, &used);
    if (used != value.size() || seconds < 0) return std::nullopt;
    return static_cast<long>(seconds * 1000);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// JSON-over-HTTP completion endpoint in the common
/// {"model","prompt","max_tokens","temperature","stop"} -> choices[0].text shape.
class HttpBackend : public CompletionBackend {
 public:
  explicit HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty()) fail(ErrorCategory::usage, "http backend: empty base URL");
  }

  std::string id() const override { return "http:" + cfg_.base_url; }

  std::string complete(const CompletionRequest& req) override {
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(cfg_.timeout_s);
    client.set_read_timeout(cfg_.timeout_s);
    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    json body{{"model", req.model_name},
              {"prompt", req.prompt},
              {"max_tokens", req.max_tokens},
              {"temperature", req.temperature}};
    if (!req.stop.empty()) body["stop"] = req.stop;

    auto res = client.Post(cfg_.path, headers, body.dump(), "application/json");
    if (!res) throw BackendError("http: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500) {
      throw BackendError("http status " + std::to_string(res->status), true,
                         parse_retry_after(res->get_header_value("Retry-After")));
    }
    if (res->status != 200) {
      throw BackendError("http status " + std::to_string(res->status) + ": " + res->body.substr(0, 200), false);
    }
    try {
      return json::parse(res->body).at("choices").at(0).at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw BackendError(std::string("http: malformed completion body: ") + e.what(), false);
    }
  }

 private:
  HttpBackendConfig cfg_;
};

}  // namespace instrind::model

#endif  // INSTRIND_HTTP_BACKEND_HPP
