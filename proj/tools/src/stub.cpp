// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt_tools/stub.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"

#include <httplib.h>

#include <algorithm>

namespace glossmt::tools {

using nlohmann::json;

std::vector<StubRule> parse_stub_rules(std::string_view json_text) {
  std::vector<StubRule> rules;
  try {
    for (const auto& r : json::parse(json_text)) {
      const auto& c = r.at("contains");
      StubRule rule;
      if (c.is_string()) {
        rule.contains.push_back(c.get<std::string>());
      } else {
        rule.contains = c.get<std::vector<std::string>>();
      }
      rule.response = r.at("response").get<std::string>();
      rules.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad stub rules: ") + e.what());
  }
  return rules;
}

std::string stub_reply(const StubOptions& options, const json& body) {
  std::string user;
  for (const auto& m : body.at("messages")) {
    if (m.at("role") == "user") user = m.at("content").get<std::string>();
  }
  for (const auto& rule : options.rules) {
    bool all = std::all_of(rule.contains.begin(), rule.contains.end(),
                           [&](const std::string& needle) {
                             return user.find(needle) != std::string::npos;
                           });
    if (all) return rule.response;
  }
  auto lines = text::split_lines(user);
  return lines.empty() ? std::string() : lines.back();
}

struct StubServer::Impl {
  httplib::Server server;
};

StubServer::StubServer(StubOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
  impl_->server.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
    std::int64_t n = chat_requests_.fetch_add(1);
    if (n < options_.fail_first) {
      res.status = options_.fail_status;
      res.set_content(R"({"error":"unavailable"})", "application/json");
      return;
    }
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("messages")) {
      res.status = 400;
      res.set_content(R"({"error":"bad request"})", "application/json");
      return;
    }
    json reply = {{"choices",
                   json::array({{{"index", 0},
                                 {"message",
                                  {{"role", "assistant"},
                                   {"content", stub_reply(options_, body)}}}}})}};
    res.set_content(reply.dump(), "application/json");
  });
  impl_->server.Post("/score", [this](const httplib::Request&,
                                      httplib::Response& res) {
    res.set_content(json{{"score", options_.score}}.dump(), "application/json");
  });
}

StubServer::~StubServer() { stop(); }

int StubServer::start(int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
  } else if (impl_->server.bind_to_port("127.0.0.1", port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw Error("stub server cannot bind");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void StubServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

void StubServer::wait() {
  if (thread_.joinable()) thread_.join();
}

std::string StubServer::chat_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
}

std::string StubServer::score_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/score";
}

}  // namespace glossmt::tools
