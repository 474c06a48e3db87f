// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace glossmt::tools {

// Replies with `response` when the user message contains every string in
// `contains`. The first matching rule wins.
struct StubRule {
  std::vector<std::string> contains;
  std::string response;
};

struct StubOptions {
  std::vector<StubRule> rules;
  // The first `fail_first` chat requests get `fail_status`.
  int fail_first = 0;
  int fail_status = 503;
  double score = 50.0;  // returned by POST /score
};

std::vector<StubRule> parse_stub_rules(std::string_view json_text);

// Chat reply for a wire request body. Without a matching rule the last
// line of the user message is echoed.
std::string stub_reply(const StubOptions& options, const nlohmann::json& body);

// Loopback chat-completions server: POST /v1/chat/completions and
// POST /score.
class StubServer {
 public:
  explicit StubServer(StubOptions options);
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  // Binds 127.0.0.1; port 0 picks a free port. Returns the bound port.
  int start(int port = 0);
  void stop();
  int port() const { return port_; }
  std::string chat_url() const;
  std::string score_url() const;
  std::int64_t chat_requests() const { return chat_requests_.load(); }
  // Blocks until stop() is called from another thread or a signal.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  StubOptions options_;
  int port_ = 0;
  std::atomic<std::int64_t> chat_requests_{0};
  std::thread thread_;
};

}  // namespace glossmt::tools
