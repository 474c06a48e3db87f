// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/llm.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"
#include "glossmt_tools/stub.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <cstdlib>
#include <thread>

namespace glossmt {
namespace {

using namespace std::chrono_literals;
using testing::FakeTransport;
using testing::TempDir;

CompletionRequest sample(const std::string& user = "hello") {
  CompletionRequest r;
  r.model_id = "m";
  r.messages = {std::string(kExpertSystemPrompt), user};
  return r;
}

HttpResponse ok(const std::string& content) {
  return {200, testing::chat_body(content)};
}

struct Recorder {
  std::vector<std::chrono::milliseconds> waits;
  Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { waits.push_back(d); };
  }
};

TEST(CacheKey, PureAndSensitiveToEveryField) {
  auto base = sample();
  EXPECT_EQ(cache_key(base), cache_key(sample()));
  EXPECT_EQ(cache_key(base).size(), 64u);
  std::vector<CompletionRequest> variants(6, base);
  variants[0].model_id = "other";
  variants[1].messages.system = "x";
  variants[2].messages.user = "x";
  variants[3].temperature = 0.5;
  variants[4].greedy = false;
  variants[5].max_tokens = 7;
  for (const auto& v : variants) EXPECT_NE(cache_key(v), cache_key(base));
}

TEST(CacheKey, CanonicalJsonIsSortedAndCompact) {
  auto j = canonical_json(sample());
  EXPECT_EQ(j.find(": "), std::string::npos);
  EXPECT_LT(j.find("\"greedy\""), j.find("\"max_tokens\""));
  EXPECT_LT(j.find("\"max_tokens\""), j.find("\"messages\""));
  EXPECT_LT(j.find("\"messages\""), j.find("\"model_id\""));
  EXPECT_EQ(cache_key(sample()), text::sha256_hex(j));
}

TEST(Records, JsonRoundTrip) {
  CompletionRecord r{sample(), "out", 12, BackendKind::kLive};
  auto back = completion_record_from_json(to_json(r));
  EXPECT_EQ(back.response_text, "out");
  EXPECT_EQ(back.latency_ms, 12);
  EXPECT_EQ(cache_key(back.request), cache_key(r.request));
}

TEST(Wire, BodyShape) {
  auto j = wire_body(sample());
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["temperature"], 0.0);
  EXPECT_EQ(j["max_tokens"], kTranslationMaxTokens);
  ASSERT_EQ(j["messages"].size(), 2u);
  EXPECT_EQ(j["messages"][0]["role"], "system");
  EXPECT_EQ(j["messages"][1]["role"], "user");
  auto sampled = sample();
  sampled.greedy = false;
  sampled.messages.system.clear();
  auto k = wire_body(sampled);
  EXPECT_EQ(k["temperature"], 1.0);
  ASSERT_EQ(k["messages"].size(), 1u);
  EXPECT_EQ(parse_wire_response(testing::chat_body("x")), "x");
  EXPECT_THROW(parse_wire_response("{}"), Error);
}

TEST(Replay, HitReturnsIdenticalBytesAndMissNamesKey) {
  TempDir dir;
  auto cache = std::make_shared<ResponseCache>(dir.path());
  cache->store({sample(), "cached \xC3\xBC text", 5, BackendKind::kLive});
  ReplayClient replay(cache);
  auto a = replay.complete(sample());
  auto b = replay.complete(sample());
  EXPECT_EQ(a.response_text, "cached \xC3\xBC text");
  EXPECT_EQ(a.response_text, b.response_text);
  EXPECT_EQ(a.backend, BackendKind::kReplay);
  try {
    replay.complete(sample("novel"));
    FAIL();
  } catch (const CacheMiss& e) {
    EXPECT_EQ(e.key(), cache_key(sample("novel")));
    EXPECT_NE(std::string(e.what()).find("no cached response for key"),
              std::string::npos);
  }
  EXPECT_EQ(replay.stats().network_calls.load(), 0);
}

TEST(Cache, FileLayoutAndCorruption) {
  TempDir dir;
  ResponseCache cache(dir.path());
  cache.store({sample(), "x", 1, BackendKind::kLive});
  auto path = cache.path_for(cache_key(sample()));
  ASSERT_TRUE(std::filesystem::exists(path));
  auto j = nlohmann::json::parse(testing::slurp(path));
  EXPECT_EQ(j["response_text"], "x");
  {
    std::ofstream out(path);
    out << "{broken";
  }
  EXPECT_THROW(cache.lookup(sample()), Error);
}

TEST(Live, RetriesTransientFailuresWithBackoff) {
  TempDir dir;
  auto t = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&, int call) {
        if (call == 0) return HttpResponse{429, "slow down"};
        if (call == 1) return HttpResponse{503, "busy"};
        return ok("fine");
      });
  Recorder rec;
  LiveClient client(std::make_shared<ResponseCache>(dir.path()), t,
                    {"http://x/v1/chat/completions", ""}, 1, {}, rec.sleeper());
  EXPECT_EQ(client.complete(sample()).response_text, "fine");
  EXPECT_EQ(t->calls(), 3);
  EXPECT_EQ(rec.waits, (std::vector<std::chrono::milliseconds>{1000ms, 2000ms}));
  // Second call is served from the cache.
  EXPECT_EQ(client.complete(sample()).response_text, "fine");
  EXPECT_EQ(t->calls(), 3);
  EXPECT_EQ(client.stats().cache_hits.load(), 1);
}

TEST(Live, GivesUpAfterRetryBudget) {
  TempDir dir;
  auto t = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&, int) -> HttpResponse {
        throw TransportError("connection refused");
      });
  Recorder rec;
  LiveClient client(std::make_shared<ResponseCache>(dir.path()), t,
                    {"http://x", ""}, 1, {}, rec.sleeper());
  EXPECT_THROW(client.complete(sample()), TransportError);
  EXPECT_EQ(t->calls(), 4);
  EXPECT_EQ(rec.waits,
            (std::vector<std::chrono::milliseconds>{1000ms, 2000ms, 4000ms}));
}

TEST(Live, TerminalStatusCarriesBody) {
  TempDir dir;
  auto t = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&, int) {
        return HttpResponse{400, R"({"error":"bad model"})"};
      });
  LiveClient client(std::make_shared<ResponseCache>(dir.path()), t,
                    {"http://x", ""}, 1, {}, [](auto) {});
  try {
    client.complete(sample());
    FAIL();
  } catch (const HttpStatusError& e) {
    EXPECT_EQ(e.status(), 400);
    EXPECT_NE(std::string(e.what()).find("bad model"), std::string::npos);
  }
  EXPECT_EQ(t->calls(), 1);
  EXPECT_FALSE(ResponseCache(dir.path()).lookup(sample()));
}

TEST(Live, BearerTokenFromEnvironment) {
  TempDir dir;
  auto t = std::make_shared<FakeTransport>(
      [](const std::string&, const std::string&, int) { return ok("x"); });
  ::setenv("GLOSSMT_TEST_KEY", "sekret", 1);
  LiveClient client(std::make_shared<ResponseCache>(dir.path()), t,
                    {"http://x", "GLOSSMT_TEST_KEY"}, 1, {}, [](auto) {});
  client.complete(sample());
  EXPECT_EQ(t->headers().at(0).at("Authorization"), "Bearer sekret");
  ::unsetenv("GLOSSMT_TEST_KEY");
  EXPECT_THROW(client.complete(sample("other")), InvalidArgument);
}

TEST(Live, RespectsInFlightLimit) {
  TempDir dir;
  std::atomic<int> in_flight{0};
  std::atomic<int> peak{0};
  auto t = std::make_shared<FakeTransport>(
      [&](const std::string&, const std::string& body, int) {
        int now = ++in_flight;
        int prev = peak.load();
        while (now > prev && !peak.compare_exchange_weak(prev, now)) {
        }
        std::this_thread::sleep_for(10ms);
        --in_flight;
        auto j = nlohmann::json::parse(body);
        return ok(j["messages"][1]["content"].get<std::string>());
      });
  LiveClient client(std::make_shared<ResponseCache>(dir.path()), t,
                    {"http://x", ""}, 2, {}, [](auto) {});
  std::vector<std::jthread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      EXPECT_EQ(client.complete(sample("u" + std::to_string(i))).response_text,
                "u" + std::to_string(i));
    });
  }
  threads.clear();
  EXPECT_EQ(t->calls(), 8);
  EXPECT_LE(peak.load(), 2);
}

TEST(Live, LoopbackStubEchoesLastUserLine) {
  tools::StubServer stub({});
  stub.start();
  TempDir dir;
  LiveClient client(std::make_shared<ResponseCache>(dir.path()),
                    make_http_transport(std::chrono::seconds(5)),
                    {stub.chat_url(), ""});
  auto r = client.complete(sample("first line\nlast line"));
  EXPECT_EQ(r.response_text, "last line");
  EXPECT_EQ(r.backend, BackendKind::kLive);
  EXPECT_EQ(stub.chat_requests(), 1);
}

TEST(Http, UnreachableEndpointIsTransportError) {
  auto t = make_http_transport(std::chrono::seconds(1));
  EXPECT_THROW(t->post_json("http://127.0.0.1:1/v1", {}, "{}"), TransportError);
}

TEST(GlossPredictor, ParsesCachedResponse) {
  TempDir dir;
  auto cache = std::make_shared<ResponseCache>(dir.path());
  auto client = std::make_shared<ReplayClient>(cache);
  GlossPredictor predictor(client, "glosslm");
  auto req = predictor.request_for("(yeye) alimwona (yeye).", "swa");
  EXPECT_EQ(req.max_tokens, kGlossingMaxTokens);
  EXPECT_NE(req.messages.user.find("transcription in Swahili."), std::string::npos);
  EXPECT_THROW(predictor.predict_gloss("(yeye) alimwona (yeye).", "swa"),
               CacheMiss);
  cache->store({req, "3SG -PST --see-FV 3SG", 1, BackendKind::kLive});
  auto p = predictor.predict_gloss("(yeye) alimwona (yeye).", "swa");
  EXPECT_EQ(p.gloss, parse_gloss_line("3SG -PST --see-FV 3SG"));
  EXPECT_TRUE(p.warnings.empty());
}

TEST(GlossPredictor, EmptyResponseWarns) {
  TempDir dir;
  auto cache = std::make_shared<ResponseCache>(dir.path());
  GlossPredictor predictor(std::make_shared<ReplayClient>(cache), "glosslm");
  cache->store({predictor.request_for("abc", "lez"), "", 1, BackendKind::kLive});
  auto p = predictor.predict_gloss("abc", "lez");
  EXPECT_TRUE(p.gloss.empty());
  EXPECT_EQ(p.warnings.size(), 1u);
}

}  // namespace
}  // namespace glossmt
