// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/http.hpp"

#include "glossmt/error.hpp"

#include <httplib.h>

namespace glossmt {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw TransportError("invalid URL '" + url + "': missing scheme");
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse post_json(const std::string& url,
                         const std::map<std::string, std::string>& headers,
                         const std::string& body) override {
    const SplitUrl parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto result = client.Post(parts.path, h, body, "application/json");
    if (!result) {
      throw TransportError("POST " + url + " failed: " +
                           httplib::to_string(result.error()));
    }
    return {result->status, result->body};
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(
    std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

}  // namespace glossmt
