#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "werewolf/error.hpp"

namespace werewolf {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

// One chat-completion call in the common OpenAI-compatible wire shape.
struct ChatRequest {
  std::string endpoint;  // full URL, e.g. http://host:8000/v1/chat/completions
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  int max_tokens = 1024;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Minimal POST-a-JSON-body transport seam. Tests substitute mocks; the real
// implementation below wraps cpp-httplib.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Returns the response for any HTTP status; throws TransportError only
  // when no response was obtained at all (DNS, refused, timeout...).
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body) = 0;
};

struct RetryPolicy {
  int max_attempts = 4;       // total tries, not just retries
  int initial_delay_ms = 250; // before the 2nd attempt
  double multiplier = 2.0;    // delay growth per further attempt
};

// A named remote model: where to reach it and how to authenticate. The
// secret itself stays in the named environment variable and is read at call
// time, never stored in config files or logs.
struct ProviderProfile {
  std::string name;
  std::string endpoint;
  std::string model;
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::string credential_env;  // empty = endpoint needs no credential
  double temperature = 1.0;
  int max_tokens = 1024;
};

inline HttpHeaders auth_headers(const ProviderProfile& profile) {
  if (profile.credential_env.empty()) return {};
  const char* value = std::getenv(profile.credential_env.c_str());
  if (!value || !*value)
    throw CredentialError("environment variable " + profile.credential_env +
                          " is empty; cannot authenticate profile '" + profile.name + "'");
  return {{profile.auth_header, profile.auth_prefix + value}};
}

namespace detail {

// Plain counting semaphore (std::counting_semaphore's capacity is a
// template parameter, which doesn't fit a runtime-configured limit).
class Gate {
 public:
  explicit Gate(int slots) : slots_(slots < 1 ? 1 : slots) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return slots_ > 0; });
    --slots_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++slots_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int slots_;
};

struct GatePass {
  explicit GatePass(Gate& g) : gate(g) { gate.acquire(); }
  ~GatePass() { gate.release(); }
  GatePass(const GatePass&) = delete;
  GatePass& operator=(const GatePass&) = delete;
  Gate& gate;
};

}  // namespace detail

// Chat-completion caller with bounded concurrency and exponential backoff.
// Retryable failures: no-response transport errors, HTTP 429, HTTP 5xx.
// 401/403 raise CredentialError immediately; other statuses and exhausted
// budgets raise CompletionError carrying the last status (0 = no response).
// The sleep function is injectable so tests can assert the backoff schedule
// against a fake clock.
class Completer {
 public:
  using SleepFn = std::function<void(std::chrono::milliseconds)>;

  explicit Completer(std::shared_ptr<HttpTransport> transport, RetryPolicy retry = {},
                     int max_concurrency = 4, SleepFn sleep = {})
      : transport_(std::move(transport)),
        retry_(retry),
        gate_(max_concurrency),
        sleep_(sleep ? std::move(sleep) : [](std::chrono::milliseconds d) {
          std::this_thread::sleep_for(d);
        }) {
    if (!transport_) throw ConfigError("Completer needs a transport");
    if (retry_.max_attempts < 1) throw ConfigError("retry max_attempts must be >= 1");
  }

  std::string complete(const ChatRequest& request, const HttpHeaders& headers = {}) {
    if (request.messages.empty()) throw ConfigError("chat request has no messages");
    if (request.model.empty()) throw ConfigError("chat request has no model name");

    nlohmann::ordered_json body;
    body["model"] = request.model;
    body["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : request.messages)
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    const std::string payload = body.dump();

    detail::GatePass pass(gate_);
    double delay = static_cast<double>(retry_.initial_delay_ms);
    int last_status = 0;
    std::string last_error;

    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
      bool retryable = false;
      try {
        const HttpResponse resp = transport_->post(request.endpoint, headers, payload);
        last_status = resp.status;
        if (resp.status == 200) return extract_content(resp.body);
        if (resp.status == 401 || resp.status == 403)
          throw CredentialError("endpoint rejected the credential (HTTP " +
                                std::to_string(resp.status) + ")");
        retryable = resp.status == 429 || resp.status >= 500;
        last_error = "HTTP " + std::to_string(resp.status);
      } catch (const TransportError& ex) {
        last_status = 0;
        last_error = ex.what();
        retryable = true;
      }
      if (!retryable || attempt == retry_.max_attempts) break;
      sleep_(std::chrono::milliseconds(static_cast<long long>(delay)));
      delay *= retry_.multiplier;
    }
    throw CompletionError(last_status, "completion failed after retries: " + last_error);
  }

 private:
  static std::string extract_content(const std::string& body) {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
      throw CompletionError(200, "response body is not JSON");
    try {
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw CompletionError(200, "response body lacks choices[0].message.content");
    }
  }

  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
  detail::Gate gate_;
  SleepFn sleep_;
};

}  // namespace werewolf
