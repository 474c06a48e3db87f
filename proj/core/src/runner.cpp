// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/runner.hpp"

#include "glossmt/text.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <thread>

namespace glossmt {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using Setter =
    std::function<void(RunConfig&, const json&, const fs::path& base)>;

fs::path resolve(const json& v, const fs::path& base) {
  fs::path p = v.get<std::string>();
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

std::vector<std::string> string_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<std::string>>();
  // Comma separated, as typed on a command line.
  std::vector<std::string> out;
  std::string s = v.get<std::string>();
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    auto item = text::trim(std::string_view(s).substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

CorpusSource& support_source(RunConfig& c) {
  if (!c.support_corpus) c.support_corpus.emplace();
  return *c.support_corpus;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"corpus", [](RunConfig& c, const json& v, const fs::path& b) {
         c.corpus.path = resolve(v, b);
       }},
      {"format", [](RunConfig& c, const json& v, const fs::path&) {
         c.corpus.format = parse_corpus_format(v.get<std::string>());
       }},
      {"target_corpus", [](RunConfig& c, const json& v, const fs::path& b) {
         c.corpus.target_path = resolve(v, b);
       }},
      {"support_corpus", [](RunConfig& c, const json& v, const fs::path& b) {
         support_source(c).path = resolve(v, b);
       }},
      {"support_format", [](RunConfig& c, const json& v, const fs::path&) {
         support_source(c).format = parse_corpus_format(v.get<std::string>());
       }},
      {"support_target_corpus",
       [](RunConfig& c, const json& v, const fs::path& b) {
         support_source(c).target_path = resolve(v, b);
       }},
      {"language", [](RunConfig& c, const json& v, const fs::path&) {
         c.language = v.get<std::string>();
       }},
      {"language_name", [](RunConfig& c, const json& v, const fs::path&) {
         c.language_name = v.get<std::string>();
       }},
      {"metalang", [](RunConfig& c, const json& v, const fs::path&) {
         c.metalang = v.get<std::string>();
       }},
      {"name", [](RunConfig& c, const json& v, const fs::path&) {
         c.name = v.get<std::string>();
       }},
      {"strategy", [](RunConfig& c, const json& v, const fs::path&) {
         c.strategy = parse_strategy(v.get<std::string>());
       }},
      {"n_support", [](RunConfig& c, const json& v, const fs::path&) {
         c.n_support = v.get<std::size_t>();
       }},
      {"support_pool", [](RunConfig& c, const json& v, const fs::path&) {
         if (v.is_null()) {
           c.support_pool.reset();
         } else {
           c.support_pool = v.get<std::size_t>();
         }
       }},
      {"direction", [](RunConfig& c, const json& v, const fs::path&) {
         c.direction = parse_direction(v.get<std::string>());
       }},
      {"model_id", [](RunConfig& c, const json& v, const fs::path&) {
         c.model_id = v.get<std::string>();
       }},
      {"backend", [](RunConfig& c, const json& v, const fs::path&) {
         c.backend = parse_backend(v.get<std::string>());
       }},
      {"endpoint", [](RunConfig& c, const json& v, const fs::path&) {
         c.endpoint = v.get<std::string>();
       }},
      {"api_key_env", [](RunConfig& c, const json& v, const fs::path&) {
         c.api_key_env = v.get<std::string>();
       }},
      {"gloss_endpoint", [](RunConfig& c, const json& v, const fs::path&) {
         c.gloss_endpoint = v.get<std::string>();
       }},
      {"gloss_model_id", [](RunConfig& c, const json& v, const fs::path&) {
         c.gloss_model_id = v.get<std::string>();
       }},
      {"external_scorer", [](RunConfig& c, const json& v, const fs::path&) {
         c.external_scorer = v.get<std::string>();
       }},
      {"concurrency", [](RunConfig& c, const json& v, const fs::path&) {
         c.concurrency = v.get<int>();
       }},
      {"seed", [](RunConfig& c, const json& v, const fs::path&) {
         c.seed = v.get<std::uint64_t>();
       }},
      {"cache_dir", [](RunConfig& c, const json& v, const fs::path& b) {
         c.cache_dir = resolve(v, b);
       }},
      {"metrics", [](RunConfig& c, const json& v, const fs::path&) {
         c.metrics = string_list(v);
       }},
      {"output_dir", [](RunConfig& c, const json& v, const fs::path& b) {
         c.output_dir = resolve(v, b);
       }},
      {"dictionary", [](RunConfig& c, const json& v, const fs::path& b) {
         if (v.is_null()) {
           c.dictionary.reset();
         } else {
           c.dictionary = resolve(v, b);
         }
       }},
      {"extraction", [](RunConfig& c, const json& v, const fs::path&) {
         for (const auto& [k, e] : v.items()) {
           if (k != "enclosure") {
             throw InvalidArgument("unknown config key 'extraction." + k + "'");
           }
           for (const auto& [side, marker] : e.items()) {
             if (side == "open") {
               c.enclosure.open = marker.get<std::string>();
             } else if (side == "close") {
               c.enclosure.close = marker.get<std::string>();
             } else {
               throw InvalidArgument("unknown config key 'extraction.enclosure." +
                                     side + "'");
             }
           }
         }
       }},
      {"enclosure_open", [](RunConfig& c, const json& v, const fs::path&) {
         c.enclosure.open = v.get<std::string>();
       }},
      {"enclosure_close", [](RunConfig& c, const json& v, const fs::path&) {
         c.enclosure.close = v.get<std::string>();
       }},
      {"raw_gloss", [](RunConfig& c, const json& v, const fs::path&) {
         c.raw_gloss = v.get<bool>();
       }},
      {"temperature", [](RunConfig& c, const json& v, const fs::path&) {
         c.temperature = v.get<double>();
       }},
      {"greedy", [](RunConfig& c, const json& v, const fs::path&) {
         c.greedy = v.get<bool>();
       }},
      {"max_tokens", [](RunConfig& c, const json& v, const fs::path&) {
         c.max_tokens = v.get<int>();
       }},
      {"resamples", [](RunConfig& c, const json& v, const fs::path&) {
         c.resamples = v.get<int>();
       }},
      {"alpha", [](RunConfig& c, const json& v, const fs::path&) {
         c.alpha = v.get<double>();
       }},
  };
  return table;
}

bool is_gloss_metric(std::string_view m) {
  return m == "gloss-word-acc" || m == "gloss-morpheme-acc";
}

const std::set<std::string, std::less<>>& known_metrics() {
  static const std::set<std::string, std::less<>> names = {
      "bleu", "chrf++", "gloss-word-acc", "gloss-morpheme-acc", "external"};
  return names;
}

std::string file_digest(const fs::path& p) {
  if (p.empty()) return "";
  return text::sha256_hex(read_file(p));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

bool is_ascii_punct(char ch) {
  return std::ispunct(static_cast<unsigned char>(ch)) != 0;
}

Corpus load_source(const CorpusSource& src, const RunConfig& cfg) {
  CorpusInfo info{cfg.language, cfg.metalang, cfg.name};
  return load_corpus_file(src.path, src.format, info, src.target_path).corpus;
}

struct Plan {
  Corpus eval;
  std::vector<std::size_t> eval_indices;  // positions in the main corpus
  std::vector<IgtEntry> support;
  std::string language;
  std::string language_name;
  std::optional<std::vector<DictionaryEntry>> dictionary;
};

Plan make_plan(const RunConfig& cfg) {
  validate_run_config(cfg);
  Plan plan;
  Corpus main = load_source(cfg.corpus, cfg);
  plan.language = cfg.language.empty() ? main.language : cfg.language;
  if (plan.language.empty()) {
    throw InvalidArgument("config does not name a language");
  }
  plan.language_name = cfg.language_name.empty()
                           ? language_display_name(plan.language)
                           : cfg.language_name;

  std::size_t wanted = is_zero_support(cfg.strategy) ? 0 : cfg.n_support;
  std::vector<IgtEntry> pool;
  std::size_t offset = 0;
  if (cfg.support_corpus) {
    Corpus support = load_source(*cfg.support_corpus, cfg);
    pool = support.entries;
    plan.eval = main;
  } else {
    std::size_t reserved = cfg.support_pool.value_or(cfg.n_support);
    if (reserved >= main.size()) {
      throw InvalidArgument("support pool of " + std::to_string(reserved) +
                            " leaves no eval entries in a corpus of " +
                            std::to_string(main.size()));
    }
    CorpusSplit split = split_support(main, SplitSpec{reserved});
    pool = std::move(split.support.entries);
    plan.eval = std::move(split.eval);
    offset = reserved;
  }
  if (wanted > pool.size()) {
    throw InvalidArgument("n_support " + std::to_string(wanted) +
                          " exceeds the support pool of " +
                          std::to_string(pool.size()));
  }
  plan.support.assign(pool.begin(),
                      pool.begin() + static_cast<std::ptrdiff_t>(wanted));
  for (std::size_t i = 0; i < plan.eval.size(); ++i) {
    plan.eval_indices.push_back(offset + i);
  }
  if (plan.eval.empty()) throw InvalidArgument("no eval entries");

  if (cfg.dictionary) {
    plan.dictionary = load_dictionary(read_file(*cfg.dictionary));
  }

  // Support problems would fail every entry; report them once, up front.
  PromptRequest probe;
  probe.strategy = cfg.strategy;
  probe.support = plan.support;
  probe.input.transcription = "x";
  probe.input.translation = "x";
  probe.source_language_name = plan.language_name;
  if (needs_input_gloss(cfg.strategy)) probe.input_gloss_override = GlossLine{};
  if (cfg.strategy == Strategy::kDictBaseline) {
    probe.dictionary = std::vector<DictionaryEntry>{};
  }
  check_request(probe);
  return plan;
}

struct GlossCounts {
  std::int64_t word_hits = 0;
  std::int64_t words = 0;
  std::int64_t morph_hits = 0;
  std::int64_t morphs = 0;
};

void count_gloss(const GlossLine& pred, const GlossLine& gold,
                 GlossCounts& counts) {
  for (std::size_t i = 0; i < gold.words.size(); ++i) {
    const auto& g = gold.words[i];
    counts.words += 1;
    counts.morphs += static_cast<std::int64_t>(g.morphemes.size());
    if (i >= pred.words.size()) continue;
    const auto& p = pred.words[i];
    if (text::nfc(render_gloss_word(p)) == text::nfc(render_gloss_word(g))) {
      counts.word_hits += 1;
    }
    for (std::size_t k = 0; k < g.morphemes.size() && k < p.morphemes.size();
         ++k) {
      if (text::nfc(p.morphemes[k].surface) ==
          text::nfc(g.morphemes[k].surface)) {
        counts.morph_hits += 1;
      }
    }
  }
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw InvalidArgument("run config must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    apply_override(cfg, key, value, base_dir);
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

void apply_override(RunConfig& cfg, const std::string& key, const json& value,
                    const fs::path& base_dir) {
  auto it = setters().find(key);
  if (it == setters().end()) {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
  try {
    it->second(cfg, value, base_dir);
  } catch (const json::exception& e) {
    throw InvalidArgument("config key '" + key + "': " + e.what());
  }
}

void apply_flag(RunConfig& cfg, const std::string& key, std::string_view text,
                const fs::path& base_dir) {
  static const std::set<std::string, std::less<>> typed = {
      "n_support",   "support_pool", "concurrency", "seed",
      "raw_gloss",   "temperature",  "greedy",      "max_tokens",
      "resamples",   "alpha",        "extraction"};
  json value;
  if (typed.contains(key)) {
    value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
      throw InvalidArgument("config key '" + key + "': cannot parse '" +
                            std::string(text) + "'");
    }
  } else {
    value = std::string(text);
  }
  apply_override(cfg, key, value, base_dir);
}

std::vector<std::string> run_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.corpus.path.empty()) throw InvalidArgument("config needs a corpus");
  if (cfg.concurrency < 1) throw InvalidArgument("concurrency must be >= 1");
  if (cfg.model_id.empty()) throw InvalidArgument("config needs a model_id");
  if (cfg.cache_dir.empty()) throw InvalidArgument("config needs a cache_dir");
  if (!is_zero_support(cfg.strategy) && cfg.n_support == 0) {
    throw InvalidArgument(std::string(display_name(cfg.strategy)) +
                          " requires support examples");
  }
  if (cfg.support_pool && cfg.n_support > *cfg.support_pool &&
      !is_zero_support(cfg.strategy)) {
    throw InvalidArgument("n_support exceeds support_pool");
  }
  if (cfg.strategy == Strategy::kModelGloss && cfg.gloss_endpoint.empty()) {
    throw InvalidArgument("ModelGloss requires gloss_endpoint");
  }
  if (cfg.strategy == Strategy::kDictBaseline && !cfg.dictionary) {
    throw InvalidArgument("DictBaseline requires a dictionary");
  }
  if (cfg.backend == BackendKind::kLive && cfg.endpoint.empty()) {
    throw InvalidArgument("live backend requires an endpoint");
  }
  if (cfg.max_tokens < 1) throw InvalidArgument("max_tokens must be >= 1");
  if (cfg.metrics.empty()) throw InvalidArgument("no metrics configured");
  for (const auto& m : cfg.metrics) {
    if (!known_metrics().contains(m)) {
      throw InvalidArgument("unknown metric '" + m + "'");
    }
    if (is_gloss_metric(m) && cfg.strategy != Strategy::kChainGloss &&
        cfg.strategy != Strategy::kModelGloss) {
      throw InvalidArgument(m + " needs a strategy that predicts glosses");
    }
    if (m == "external" && cfg.external_scorer.empty()) {
      throw InvalidArgument("external metric requires external_scorer");
    }
  }
  if (cfg.enclosure.open.empty() || cfg.enclosure.close.empty()) {
    throw InvalidArgument("enclosure markers must be non-empty");
  }
}

std::string config_digest(const RunConfig& cfg) {
  // Only settings that can change the result bytes; paths enter by content
  // so the digest does not depend on where the files live.
  ordered_json j;
  j["corpus"] = file_digest(cfg.corpus.path);
  j["format"] = to_string(cfg.corpus.format);
  j["target_corpus"] = file_digest(cfg.corpus.target_path);
  if (cfg.support_corpus) {
    j["support_corpus"] = file_digest(cfg.support_corpus->path);
    j["support_format"] = to_string(cfg.support_corpus->format);
    j["support_target_corpus"] = file_digest(cfg.support_corpus->target_path);
  }
  j["language"] = cfg.language;
  j["language_name"] = cfg.language_name;
  j["metalang"] = cfg.metalang;
  j["strategy"] = to_string(cfg.strategy);
  j["n_support"] = is_zero_support(cfg.strategy) ? 0 : cfg.n_support;
  j["support_pool"] = cfg.support_pool.value_or(cfg.n_support);
  j["direction"] = to_string(cfg.direction);
  j["model_id"] = cfg.model_id;
  if (cfg.strategy == Strategy::kModelGloss) {
    j["gloss_model_id"] = cfg.gloss_model_id;
  }
  j["metrics"] = cfg.metrics;
  j["dictionary"] = cfg.dictionary ? file_digest(*cfg.dictionary) : "";
  j["enclosure"] = {cfg.enclosure.open, cfg.enclosure.close};
  j["raw_gloss"] = cfg.raw_gloss;
  j["temperature"] = cfg.temperature;
  j["greedy"] = cfg.greedy;
  j["max_tokens"] = cfg.max_tokens;
  return text::sha256_hex(j.dump()).substr(0, 16);
}

std::vector<DictionaryEntry> load_dictionary(std::string_view content) {
  std::vector<DictionaryEntry> out;
  std::map<std::string, std::size_t, std::less<>> index;
  auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tokens = text::split_ascii_ws(lines[i]);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ParseError("dictionary lines need a word and a translation",
                       static_cast<int>(i + 1));
    }
    std::string word = text::nfc(tokens[0]);
    std::string tr = text::nfc(tokens[1]);
    auto [it, inserted] = index.try_emplace(word, out.size());
    if (inserted) out.push_back({word, {}});
    auto& trs = out[it->second].translations;
    if (std::find(trs.begin(), trs.end(), tr) == trs.end()) trs.push_back(tr);
  }
  return out;
}

std::vector<DictionaryEntry> lookup_dictionary(
    const std::vector<DictionaryEntry>& dictionary, std::string_view sentence) {
  std::map<std::string_view, const DictionaryEntry*, std::less<>> by_word;
  for (const auto& e : dictionary) by_word.emplace(e.word, &e);
  std::vector<DictionaryEntry> out;
  std::set<std::string, std::less<>> seen;
  for (const auto& token : text::split_ascii_ws(sentence)) {
    std::string_view w = token;
    while (!w.empty() && is_ascii_punct(w.front())) w.remove_prefix(1);
    while (!w.empty() && is_ascii_punct(w.back())) w.remove_suffix(1);
    if (w.empty()) continue;
    auto it = by_word.find(w);
    if (it == by_word.end()) it = by_word.find(ascii_lower(w));
    if (it == by_word.end()) continue;
    if (seen.insert(it->second->word).second) out.push_back(*it->second);
  }
  return out;
}

RunClients make_clients(const RunConfig& cfg,
                        std::shared_ptr<HttpTransport> transport) {
  auto cache = std::make_shared<ResponseCache>(cfg.cache_dir);
  RunClients clients;
  bool want_gloss = cfg.strategy == Strategy::kModelGloss;
  if (cfg.backend == BackendKind::kReplay) {
    clients.translation = std::make_shared<ReplayClient>(cache);
    if (want_gloss) clients.glossing = std::make_shared<ReplayClient>(cache);
    return clients;
  }
  if (!transport) transport = make_http_transport();
  clients.translation = std::make_shared<LiveClient>(
      cache, transport, EndpointConfig{cfg.endpoint, cfg.api_key_env},
      cfg.concurrency);
  if (want_gloss) {
    clients.glossing = std::make_shared<LiveClient>(
        cache, transport, EndpointConfig{cfg.gloss_endpoint, cfg.api_key_env},
        cfg.concurrency);
  }
  return clients;
}

std::size_t RunResult::failed_entries() const {
  return static_cast<std::size_t>(
      std::count_if(per_entry.begin(), per_entry.end(),
                    [](const EntryResult& e) { return e.error.has_value(); }));
}

std::vector<std::string> RunResult::hypotheses() const {
  std::vector<std::string> out;
  out.reserve(per_entry.size());
  for (const auto& e : per_entry) out.push_back(e.translation);
  return out;
}

std::vector<std::string> RunResult::references() const {
  std::vector<std::string> out;
  out.reserve(per_entry.size());
  for (const auto& e : per_entry) out.push_back(e.reference);
  return out;
}

RunResult run_experiment(const RunConfig& cfg) {
  return run_experiment(cfg, make_clients(cfg));
}

RunResult run_experiment(const RunConfig& cfg, const RunClients& clients) {
  auto started = std::chrono::steady_clock::now();
  Plan plan = make_plan(cfg);
  if (!clients.translation) throw InvalidArgument("no translation client");
  std::unique_ptr<GlossPredictor> predictor;
  if (cfg.strategy == Strategy::kModelGloss) {
    if (!clients.glossing) throw InvalidArgument("no glossing client");
    predictor =
        std::make_unique<GlossPredictor>(clients.glossing, cfg.gloss_model_id);
  }

  const bool to_english = cfg.direction == Direction::kToEnglish;
  const std::size_t n = plan.eval.size();

  RunResult result;
  result.language = plan.language;
  result.corpus_name = cfg.name;
  result.strategy = cfg.strategy;
  result.direction = cfg.direction;
  result.n_support = plan.support.size();
  result.config_digest = config_digest(cfg);
  result.per_entry.resize(n);

  std::atomic<std::int64_t> glossing_requests{0};
  auto process = [&](std::size_t i) {
    const IgtEntry& entry = plan.eval.entries[i];
    EntryResult& out = result.per_entry[i];
    out.entry_index = plan.eval_indices[i];
    out.reference = to_english ? entry.translation : entry.transcription;
    out.source = to_english ? entry.transcription : entry.translation;
    try {
      PromptRequest req;
      req.strategy = cfg.strategy;
      req.support = plan.support;
      req.input = entry;
      req.direction = cfg.direction;
      req.source_language_name = plan.language_name;
      req.target_language_name = language_display_name(cfg.metalang);
      req.enclosure = cfg.enclosure;
      req.raw_gloss = cfg.raw_gloss;
      if (cfg.strategy == Strategy::kModelGloss) {
        glossing_requests.fetch_add(1);
        GlossPrediction pred =
            predictor->predict_gloss(entry.transcription, plan.language);
        out.warnings = pred.warnings;
        out.gloss = render_gloss(pred.gloss);
        req.input_gloss_override = std::move(pred.gloss);
        req.raw_gloss = false;
      } else if (needs_input_gloss(cfg.strategy)) {
        if (!entry.gloss || entry.gloss->empty()) {
          throw InvalidArgument("entry has no gold gloss");
        }
        req.input_gloss_override = *entry.gloss;
      }
      if (cfg.strategy == Strategy::kDictBaseline) {
        req.dictionary = lookup_dictionary(*plan.dictionary, out.source);
      }
      PromptMessages messages = build_prompt(req);
      out.prompt_digest = messages.digest();

      CompletionRequest creq;
      creq.model_id = cfg.model_id;
      creq.messages = std::move(messages);
      creq.temperature = cfg.temperature;
      creq.greedy = cfg.greedy;
      creq.max_tokens = cfg.max_tokens;
      CompletionRecord record = clients.translation->complete(creq);

      Extraction ext =
          extract_translation(record.response_text, cfg.strategy, cfg.enclosure);
      out.translation = ext.translation;
      out.method = std::string(to_string(ext.method));
      if (ext.gloss) out.gloss = render_gloss(*ext.gloss);
      out.segmentation = ext.segmentation;
    } catch (const Error& e) {
      out.translation.clear();
      out.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      process(i);
    }
  };
  std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.concurrency), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Workers write into their own slots and slots follow eval order, which
  // is ascending entry_index already.
  auto hyps = result.hypotheses();
  auto refs = result.references();
  for (const auto& m : cfg.metrics) {
    if (m == "bleu") {
      ScoreReport r = bleu(hyps, refs);
      result.scores.push_back(r);
    } else if (m == "chrf++") {
      result.scores.push_back(chrf_pp(hyps, refs));
    } else if (m == "external") {
      std::vector<std::string> sources;
      for (const auto& e : result.per_entry) sources.push_back(e.source);
      auto transport = make_http_transport();
      result.scores.push_back(external_score(
          hyps, refs, sources, ExternalScorerConfig{cfg.external_scorer},
          *transport));
    } else if (is_gloss_metric(m)) {
      GlossCounts counts;
      std::size_t scored = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& gold = plan.eval.entries[i].gloss;
        if (!gold || gold->empty()) continue;
        GlossLine pred;
        if (result.per_entry[i].gloss) {
          pred = parse_gloss_line(*result.per_entry[i].gloss);
        }
        count_gloss(pred, *gold, counts);
        ++scored;
      }
      ScoreReport r;
      r.sentence_count = scored;
      if (m == "gloss-word-acc") {
        r.metric_name = "GlossWordAcc";
        r.corpus_score = counts.words == 0 ? 0.0
                                           : 100.0 * counts.word_hits /
                                                 counts.words;
        r.config_digest = "gloss-word-acc|micro|nfc";
      } else {
        r.metric_name = "GlossMorphemeAcc";
        r.corpus_score = counts.morphs == 0 ? 0.0
                                            : 100.0 * counts.morph_hits /
                                                  counts.morphs;
        r.config_digest = "gloss-morpheme-acc|micro|nfc";
      }
      result.scores.push_back(r);
    }
  }

  result.timing.wall_ms = elapsed_ms(started);
  result.timing.translation_requests =
      clients.translation->stats().requests.load();
  result.timing.glossing_requests = glossing_requests.load();
  result.timing.network_calls = clients.translation->stats().network_calls.load();
  result.timing.cache_hits = clients.translation->stats().cache_hits.load();
  if (clients.glossing && clients.glossing != clients.translation) {
    result.timing.network_calls += clients.glossing->stats().network_calls.load();
    result.timing.cache_hits += clients.glossing->stats().cache_hits.load();
  }

  std::size_t failed = result.failed_entries();
  if (failed * 2 > n) {
    throw RunFailed(std::to_string(failed) + " of " + std::to_string(n) +
                        " entries failed",
                    std::move(result));
  }
  return result;
}

std::vector<std::pair<std::size_t, RunResult>> ablate_nshot(
    const RunConfig& cfg, const std::vector<std::size_t>& ns) {
  if (ns.empty()) return {};
  return ablate_nshot(cfg, ns, make_clients(cfg));
}

std::vector<std::pair<std::size_t, RunResult>> ablate_nshot(
    const RunConfig& cfg, const std::vector<std::size_t>& ns,
    const RunClients& clients) {
  std::vector<std::pair<std::size_t, RunResult>> out;
  if (ns.empty()) return out;
  if (is_zero_support(cfg.strategy)) {
    throw InvalidArgument(std::string(display_name(cfg.strategy)) +
                          " takes no support examples");
  }
  std::size_t max_n = *std::max_element(ns.begin(), ns.end());
  std::size_t pool = cfg.support_pool.value_or(max_n);
  std::size_t available = 0;
  if (cfg.support_corpus) {
    available = load_source(*cfg.support_corpus, cfg).size();
  } else {
    // Leave at least one eval entry.
    std::size_t size = load_source(cfg.corpus, cfg).size();
    available = size == 0 ? 0 : size - 1;
  }
  if (max_n > pool || pool > available) {
    throw InvalidArgument("n = " + std::to_string(max_n) +
                          " exceeds the support pool of " +
                          std::to_string(std::min(pool, available)));
  }
  RunConfig base = cfg;
  if (!base.support_corpus) base.support_pool = pool;
  for (std::size_t n : ns) {
    RunConfig c = base;
    c.n_support = n;
    out.emplace_back(n, run_experiment(c, clients));
  }
  return out;
}

std::vector<SignificanceRow> compare_runs(const RunResult& a,
                                          const RunResult& b,
                                          const BootstrapConfig& cfg,
                                          const std::vector<Metric>& metrics) {
  if (a.per_entry.size() != b.per_entry.size()) {
    throw InvalidArgument("runs cover different entries");
  }
  for (std::size_t i = 0; i < a.per_entry.size(); ++i) {
    if (a.per_entry[i].entry_index != b.per_entry[i].entry_index) {
      throw InvalidArgument("runs cover different entries");
    }
    if (a.per_entry[i].reference != b.per_entry[i].reference) {
      throw InvalidArgument("runs use different references at entry " +
                            std::to_string(a.per_entry[i].entry_index));
    }
  }
  auto ha = a.hypotheses();
  auto hb = b.hypotheses();
  auto refs = a.references();
  std::vector<SignificanceRow> rows;
  for (Metric m : metrics) {
    BootstrapResult r = paired_bootstrap(ha, hb, refs, m, cfg);
    rows.push_back({std::string(to_string(m) == "bleu" ? "BLEU" : "chrF++"),
                    r.score_a, r.score_b, r.mean_delta, r.p_value,
                    r.significant});
  }
  return rows;
}

ordered_json to_json(const RunResult& result) {
  ordered_json j;
  j["language"] = result.language;
  j["corpus"] = result.corpus_name;
  j["strategy"] = to_string(result.strategy);
  j["direction"] = to_string(result.direction);
  j["n_support"] = result.n_support;
  j["config_digest"] = result.config_digest;
  ordered_json scores = ordered_json::array();
  for (const auto& s : result.scores) {
    ordered_json o;
    o["metric"] = s.metric_name;
    o["score"] = s.corpus_score;
    o["sentence_count"] = s.sentence_count;
    o["config"] = s.config_digest;
    scores.push_back(std::move(o));
  }
  j["scores"] = std::move(scores);
  ordered_json entries = ordered_json::array();
  for (const auto& e : result.per_entry) {
    ordered_json o;
    o["entry_index"] = e.entry_index;
    o["prompt_digest"] = e.prompt_digest;
    o["source"] = e.source;
    o["translation"] = e.translation;
    o["reference"] = e.reference;
    o["gloss"] = e.gloss ? ordered_json(*e.gloss) : ordered_json(nullptr);
    if (e.segmentation) o["segmentation"] = *e.segmentation;
    o["method"] = e.method;
    o["error"] = e.error ? ordered_json(*e.error) : ordered_json(nullptr);
    if (!e.warnings.empty()) o["warnings"] = e.warnings;
    entries.push_back(std::move(o));
  }
  j["per_entry"] = std::move(entries);
  return j;
}

RunResult run_result_from_json(const json& j) {
  try {
    RunResult r;
    r.language = j.at("language").get<std::string>();
    r.corpus_name = j.value("corpus", "");
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.direction = parse_direction(j.at("direction").get<std::string>());
    r.n_support = j.at("n_support").get<std::size_t>();
    r.config_digest = j.at("config_digest").get<std::string>();
    for (const auto& s : j.at("scores")) {
      ScoreReport sr;
      sr.metric_name = s.at("metric").get<std::string>();
      sr.corpus_score = s.at("score").get<double>();
      sr.sentence_count = s.at("sentence_count").get<std::size_t>();
      sr.config_digest = s.value("config", "");
      r.scores.push_back(std::move(sr));
    }
    for (const auto& o : j.at("per_entry")) {
      EntryResult e;
      e.entry_index = o.at("entry_index").get<std::size_t>();
      e.prompt_digest = o.value("prompt_digest", "");
      e.source = o.value("source", "");
      e.translation = o.at("translation").get<std::string>();
      e.reference = o.at("reference").get<std::string>();
      if (o.contains("gloss") && !o["gloss"].is_null()) {
        e.gloss = o["gloss"].get<std::string>();
      }
      if (o.contains("segmentation")) {
        e.segmentation = o["segmentation"].get<std::string>();
      }
      e.method = o.value("method", "");
      if (o.contains("error") && !o["error"].is_null()) {
        e.error = o["error"].get<std::string>();
      }
      if (o.contains("warnings")) {
        e.warnings = o["warnings"].get<std::vector<std::string>>();
      }
      r.per_entry.push_back(std::move(e));
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed run result: ") + e.what());
  }
}

ordered_json to_json(const RunTiming& timing) {
  ordered_json j;
  j["wall_ms"] = timing.wall_ms;
  j["translation_requests"] = timing.translation_requests;
  j["glossing_requests"] = timing.glossing_requests;
  j["network_calls"] = timing.network_calls;
  j["cache_hits"] = timing.cache_hits;
  return j;
}

}  // namespace glossmt
