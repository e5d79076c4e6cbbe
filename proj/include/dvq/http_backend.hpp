#pragma once

#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "dvq/llm.hpp"

namespace dvq {

/// Connection settings for a live chat-completion service. The API key
/// is never written in configuration; `api_key_env` names the
/// environment variable that holds it.
struct HttpBackendConfig {
  std::string endpoint;  // full URL, e.g. http://host:8080/v1/chat/completions
  std::string model;
  std::string api_key_env;
  int max_retries = 3;
  int retry_initial_ms = 250;
  int timeout_seconds = 60;
};

/// Talks to an OpenAI-style chat-completions endpoint. Transient
/// failures (connection errors, 429, 5xx) are retried with bounded
/// exponential backoff; anything else surfaces immediately.
class HttpChatBackend : public LlmBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
    split_endpoint();
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (!key || !*key) {
        throw std::runtime_error("environment variable " + config_.api_key_env +
                                 " is not set (it must hold the backend API key)");
      }
      api_key_ = key;
    }
  }

  std::vector<std::string> complete(const std::string& prompt,
                                    const DecodingParams& params) override {
    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = params.temperature;
    body["max_tokens"] = params.max_tokens;
    if (params.n > 1) body["n"] = params.n;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        auto delay = std::chrono::milliseconds(config_.retry_initial_ms) * (1 << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }
      httplib::Client client(base_url_);
      client.set_connection_timeout(config_.timeout_seconds);
      client.set_read_timeout(config_.timeout_seconds);
      httplib::Headers headers;
      if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
      auto res = client.Post(path_, headers, payload, "application/json");
      if (!res) {
        last_error = "connection to " + base_url_ + " failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "backend returned HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw std::runtime_error("backend request failed with HTTP " +
                                 std::to_string(res->status) + ": " + res->body);
      }
      return parse_completions(res->body);
    }
    throw std::runtime_error("backend unreachable after " +
                             std::to_string(config_.max_retries + 1) + " attempts; last error: " +
                             last_error);
  }

 private:
  void split_endpoint() {
    const std::string& url = config_.endpoint;
    size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
      throw std::runtime_error("backend endpoint must be a full URL: " + url);
    }
    size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) {
      base_url_ = url;
      path_ = "/";
    } else {
      base_url_ = url.substr(0, path);
      path_ = url.substr(path);
    }
  }

  static std::vector<std::string> parse_completions(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array()) {
      throw std::runtime_error("backend response is not a chat completion: " + body);
    }
    std::vector<std::string> out;
    for (const auto& choice : j["choices"]) {
      if (choice.contains("message") && choice["message"].contains("content")) {
        out.push_back(choice["message"]["content"].get<std::string>());
      }
    }
    if (out.empty()) throw std::runtime_error("backend response carried no completions");
    return out;
  }

  HttpBackendConfig config_;
  std::string base_url_;
  std::string path_;
  std::string api_key_;
};

}  // namespace dvq
