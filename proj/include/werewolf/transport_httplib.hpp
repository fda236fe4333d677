#pragma once

#include <string>
#include <utility>

#include <httplib.h>

#include "werewolf/client.hpp"
#include "werewolf/error.hpp"

namespace werewolf {

// Real HTTP(S) transport on cpp-httplib. Kept in its own header so unit
// tests built purely against mocks don't pull the dependency in.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(int timeout_seconds = 120) : timeout_(timeout_seconds) {}

  HttpResponse post(const std::string& url, const HttpHeaders& headers,
                    const std::string& body) override {
    const auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    client.set_write_timeout(timeout_, 0);

    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    auto result = client.Post(path, h, body, "application/json");
    if (!result)
      throw TransportError("no response from " + base + " (error code " +
                           std::to_string(static_cast<int>(result.error())) + ")");
    return {result->status, result->body};
  }

 private:
  // "https://host:1234/v1/x" -> ("https://host:1234", "/v1/x")
  static std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
      throw ConfigError("endpoint URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
  }

  int timeout_;
};

}  // namespace werewolf
