// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/http.hpp"
#include "glossmt/igt.hpp"
#include "glossmt/prompt.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace glossmt {

inline constexpr int kTranslationMaxTokens = 512;
inline constexpr int kGlossingMaxTokens = 256;

struct CompletionRequest {
  std::string model_id;
  PromptMessages messages;
  double temperature = 1.0;
  // Ask for the endpoint's deterministic decoding. Sent as temperature 0 on
  // the wire; `temperature` is still part of the cache key.
  bool greedy = true;
  int max_tokens = kTranslationMaxTokens;
};

// Sorted keys, no insignificant whitespace.
std::string canonical_json(const CompletionRequest& request);
// Hex SHA-256 of canonical_json(request).
std::string cache_key(const CompletionRequest& request);

nlohmann::json to_json(const CompletionRequest& request);
CompletionRequest completion_request_from_json(const nlohmann::json& j);

enum class BackendKind { kLive, kReplay };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend(std::string_view name);

struct CompletionRecord {
  CompletionRequest request;
  std::string response_text;
  std::int64_t latency_ms = 0;
  BackendKind backend = BackendKind::kLive;
};

nlohmann::json to_json(const CompletionRecord& record);
CompletionRecord completion_record_from_json(const nlohmann::json& j);

// One JSON file per record at <dir>/<cache_key>.json. Reads may run
// concurrently; writes are serialized and atomic (write + rename).
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<CompletionRecord> lookup(const CompletionRequest& request) const;
  void store(const CompletionRecord& record);
  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

struct ClientStats {
  std::atomic<std::int64_t> requests{0};
  std::atomic<std::int64_t> cache_hits{0};
  std::atomic<std::int64_t> network_calls{0};
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual CompletionRecord complete(const CompletionRequest& request) = 0;
  virtual BackendKind kind() const = 0;
  const ClientStats& stats() const { return stats_; }

 protected:
  ClientStats stats_;
};

// Serves cached records only; never opens a connection.
class ReplayClient final : public CompletionClient {
 public:
  explicit ReplayClient(std::shared_ptr<ResponseCache> cache)
      : cache_(std::move(cache)) {}

  // Throws CacheMiss.
  CompletionRecord complete(const CompletionRequest& request) override;
  BackendKind kind() const override { return BackendKind::kReplay; }

 private:
  std::shared_ptr<ResponseCache> cache_;
};

struct EndpointConfig {
  std::string url;  // full chat-completions URL
  // Environment variable holding the bearer token; empty for no auth.
  std::string api_key_env;
};

struct RetryPolicy {
  // Wait before each retry; the number of entries is the retry budget.
  std::vector<std::chrono::milliseconds> backoff{
      std::chrono::milliseconds(1000), std::chrono::milliseconds(2000),
      std::chrono::milliseconds(4000)};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Read-through cache in front of a chat-completions endpoint.
class LiveClient final : public CompletionClient {
 public:
  LiveClient(std::shared_ptr<ResponseCache> cache,
             std::shared_ptr<HttpTransport> transport, EndpointConfig endpoint,
             int max_in_flight = 1, RetryPolicy retry = {},
             Sleeper sleeper = {});

  // Throws TransportError after retries are exhausted, HttpStatusError for
  // terminal statuses, Error for malformed bodies.
  CompletionRecord complete(const CompletionRequest& request) override;
  BackendKind kind() const override { return BackendKind::kLive; }

 private:
  std::string call(const CompletionRequest& request);

  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<HttpTransport> transport_;
  EndpointConfig endpoint_;
  RetryPolicy retry_;
  Sleeper sleeper_;
  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int free_slots_;
};

// Request body sent to the endpoint.
nlohmann::json wire_body(const CompletionRequest& request);
// choices[0].message.content; throws Error when absent.
std::string parse_wire_response(const std::string& body);

struct GlossPrediction {
  GlossLine gloss;
  std::string raw;
  std::vector<std::string> warnings;
};

// External gloss-generation model behind a completion client.
class GlossPredictor {
 public:
  GlossPredictor(std::shared_ptr<CompletionClient> client, std::string model_id,
                 int max_tokens = kGlossingMaxTokens)
      : client_(std::move(client)),
        model_id_(std::move(model_id)),
        max_tokens_(max_tokens) {}

  CompletionRequest request_for(std::string_view transcription,
                                std::string_view language) const;
  // `language` is a language code; it is expanded to a display name.
  GlossPrediction predict_gloss(std::string_view transcription,
                                std::string_view language);
  const CompletionClient& client() const { return *client_; }

 private:
  std::shared_ptr<CompletionClient> client_;
  std::string model_id_;
  int max_tokens_;
};

}  // namespace glossmt
