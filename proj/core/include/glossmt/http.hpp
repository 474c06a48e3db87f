// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

namespace glossmt {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Minimal POST-only transport so clients can be tested without sockets.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  // Throws TransportError when no HTTP response was received.
  virtual HttpResponse post_json(const std::string& url,
                                 const std::map<std::string, std::string>&
                                     headers,
                                 const std::string& body) = 0;
};

// cpp-httplib backed transport; supports http:// and https:// URLs.
std::unique_ptr<HttpTransport> make_http_transport(
    std::chrono::seconds timeout = std::chrono::seconds(120));

}  // namespace glossmt
