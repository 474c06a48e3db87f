// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/llm.hpp"

#include "glossmt/corpus.hpp"
#include "glossmt/error.hpp"
#include "glossmt/text.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace glossmt {

using nlohmann::json;

namespace {

json messages_json(const PromptMessages& m) {
  json out = json::array();
  if (!m.system.empty()) {
    out.push_back({{"role", "system"}, {"content", m.system}});
  }
  out.push_back({{"role", "user"}, {"content", m.user}});
  return out;
}

}  // namespace

json to_json(const CompletionRequest& r) {
  return {
      {"model_id", r.model_id},
      {"messages", {{"system", r.messages.system}, {"user", r.messages.user}}},
      {"temperature", r.temperature},
      {"greedy", r.greedy},
      {"max_tokens", r.max_tokens},
  };
}

CompletionRequest completion_request_from_json(const json& j) {
  CompletionRequest r;
  r.model_id = j.at("model_id").get<std::string>();
  r.messages.system = j.at("messages").at("system").get<std::string>();
  r.messages.user = j.at("messages").at("user").get<std::string>();
  r.temperature = j.at("temperature").get<double>();
  r.greedy = j.at("greedy").get<bool>();
  r.max_tokens = j.at("max_tokens").get<int>();
  return r;
}

std::string canonical_json(const CompletionRequest& request) {
  // nlohmann::json objects keep keys sorted; dump() without indent is compact.
  return to_json(request).dump();
}

std::string cache_key(const CompletionRequest& request) {
  return text::sha256_hex(canonical_json(request));
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::kLive ? "live" : "replay";
}

BackendKind parse_backend(std::string_view name) {
  if (name == "live") return BackendKind::kLive;
  if (name == "replay") return BackendKind::kReplay;
  throw InvalidArgument("unknown backend '" + std::string(name) +
                        "' (expected live or replay)");
}

json to_json(const CompletionRecord& record) {
  return {
      {"request", to_json(record.request)},
      {"response_text", record.response_text},
      {"latency_ms", record.latency_ms},
      {"backend", std::string(to_string(record.backend))},
  };
}

CompletionRecord completion_record_from_json(const json& j) {
  CompletionRecord r;
  r.request = completion_request_from_json(j.at("request"));
  r.response_text = j.at("response_text").get<std::string>();
  r.latency_ms = j.at("latency_ms").get<std::int64_t>();
  r.backend = parse_backend(j.at("backend").get<std::string>());
  return r;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<CompletionRecord> ResponseCache::lookup(
    const CompletionRequest& request) const {
  const std::string key = cache_key(request);
  const auto path = path_for(key);
  std::string content;
  {
    std::shared_lock lock(mutex_);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    content = read_file(path);
  }
  CompletionRecord record;
  try {
    record = completion_record_from_json(json::parse(content));
  } catch (const json::exception& e) {
    throw Error("corrupt cache record " + path.string() + ": " + e.what());
  }
  if (cache_key(record.request) != key) {
    throw Error("cache record " + path.string() +
                " does not match its key; the file was edited or misnamed");
  }
  return record;
}

void ResponseCache::store(const CompletionRecord& record) {
  const std::string key = cache_key(record.request);
  const auto path = path_for(key);
  const std::string content = to_json(record).dump(2) + "\n";
  std::unique_lock lock(mutex_);
  std::filesystem::create_directories(dir_);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

CompletionRecord ReplayClient::complete(const CompletionRequest& request) {
  ++stats_.requests;
  auto record = cache_->lookup(request);
  if (!record) throw CacheMiss(cache_key(request));
  ++stats_.cache_hits;
  record->backend = BackendKind::kReplay;
  return *record;
}

LiveClient::LiveClient(std::shared_ptr<ResponseCache> cache,
                       std::shared_ptr<HttpTransport> transport,
                       EndpointConfig endpoint, int max_in_flight,
                       RetryPolicy retry, Sleeper sleeper)
    : cache_(std::move(cache)),
      transport_(std::move(transport)),
      endpoint_(std::move(endpoint)),
      retry_(std::move(retry)),
      sleeper_(std::move(sleeper)),
      free_slots_(max_in_flight) {
  if (max_in_flight < 1) {
    throw InvalidArgument("max_in_flight must be at least 1");
  }
  if (endpoint_.url.empty()) {
    throw InvalidArgument("live backend requires an endpoint URL");
  }
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

json wire_body(const CompletionRequest& request) {
  return {
      {"model", request.model_id},
      {"messages", messages_json(request.messages)},
      {"temperature", request.greedy ? 0.0 : request.temperature},
      {"max_tokens", request.max_tokens},
  };
}

std::string parse_wire_response(const std::string& body) {
  try {
    const json j = json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed completion response: ") + e.what());
  }
}

std::string LiveClient::call(const CompletionRequest& request) {
  std::map<std::string, std::string> headers;
  if (!endpoint_.api_key_env.empty()) {
    const char* token = std::getenv(endpoint_.api_key_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw InvalidArgument("environment variable " + endpoint_.api_key_env +
                            " is not set");
    }
    headers["Authorization"] = std::string("Bearer ") + token;
  }
  const std::string body = wire_body(request).dump();

  for (std::size_t attempt = 0;; ++attempt) {
    std::string failure;
    try {
      ++stats_.network_calls;
      HttpResponse response = transport_->post_json(endpoint_.url, headers, body);
      if (response.status >= 200 && response.status < 300) {
        return parse_wire_response(response.body);
      }
      if (response.status != 429 && response.status < 500) {
        throw HttpStatusError(response.status, response.body);
      }
      failure = "HTTP " + std::to_string(response.status) + ": " + response.body;
    } catch (const TransportError& e) {
      failure = e.what();
    }
    if (attempt >= retry_.backoff.size()) {
      throw TransportError("giving up after " + std::to_string(attempt + 1) +
                           " attempts: " + failure);
    }
    sleeper_(retry_.backoff[attempt]);
  }
}

CompletionRecord LiveClient::complete(const CompletionRequest& request) {
  ++stats_.requests;
  if (auto cached = cache_->lookup(request)) {
    ++stats_.cache_hits;
    return *cached;
  }

  {
    std::unique_lock lock(slots_mutex_);
    slots_cv_.wait(lock, [&] { return free_slots_ > 0; });
    --free_slots_;
  }
  struct Release {
    LiveClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->slots_mutex_);
        ++self->free_slots_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};

  const auto start = std::chrono::steady_clock::now();
  CompletionRecord record;
  record.request = request;
  record.response_text = call(request);
  record.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  record.backend = BackendKind::kLive;
  cache_->store(record);
  return record;
}

CompletionRequest GlossPredictor::request_for(std::string_view transcription,
                                              std::string_view language) const {
  CompletionRequest request;
  request.model_id = model_id_;
  request.messages = build_glossing_prompt(
      transcription, language_display_name(language), Segmented::kUnknown);
  request.max_tokens = max_tokens_;
  return request;
}

GlossPrediction GlossPredictor::predict_gloss(std::string_view transcription,
                                              std::string_view language) {
  const CompletionRecord record =
      client_->complete(request_for(transcription, language));
  GlossPrediction prediction;
  prediction.raw = record.response_text;
  std::string_view body = text::trim(record.response_text);
  // Some glossing models echo the cue.
  if (text::starts_with_icase(body, "glosses:")) {
    body = text::trim(body.substr(8));
  }
  prediction.gloss = parse_gloss_line(text::nfc(body));
  if (prediction.gloss.empty()) {
    prediction.warnings.push_back("gloss model returned an empty gloss for '" +
                                  std::string(transcription) + "'");
  }
  return prediction;
}

}  // namespace glossmt
