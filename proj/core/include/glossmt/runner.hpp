// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/corpus.hpp"
#include "glossmt/error.hpp"
#include "glossmt/llm.hpp"
#include "glossmt/metrics.hpp"
#include "glossmt/prompt.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace glossmt {

struct CorpusSource {
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kJsonl;
  std::filesystem::path target_path;  // parallel format only
};

struct RunConfig {
  CorpusSource corpus;
  // Support examples come from here when set; the whole main corpus is then
  // evaluated.
  std::optional<CorpusSource> support_corpus;
  std::string language;       // language code, e.g. "swa"
  std::string language_name;  // defaults to the display name of `language`
  std::string metalang = "en";
  std::string name;

  Strategy strategy = Strategy::kFewShot;
  std::size_t n_support = 21;
  // Entries reserved ahead of the eval split. Defaults to n_support; the
  // N-shot sweep pins it so every run sees the same eval entries.
  std::optional<std::size_t> support_pool;
  Direction direction = Direction::kToEnglish;

  std::string model_id;
  BackendKind backend = BackendKind::kReplay;
  std::string endpoint;
  std::string api_key_env;
  std::string gloss_endpoint;
  std::string gloss_model_id = "glosslm";
  std::string external_scorer;

  int concurrency = 1;
  std::uint64_t seed = 12345;
  std::filesystem::path cache_dir;
  std::vector<std::string> metrics{"bleu", "chrf++"};
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> dictionary;

  Enclosure enclosure;
  bool raw_gloss = false;
  double temperature = 1.0;
  bool greedy = true;
  int max_tokens = kTranslationMaxTokens;
  int resamples = 1000;
  double alpha = 0.05;
};

// Parses the JSON config. Relative paths resolve against `base_dir`.
// Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Applies one "key=value" style override using the same key names and
// types as the JSON file.
void apply_override(RunConfig& cfg, const std::string& key,
                    const nlohmann::json& value,
                    const std::filesystem::path& base_dir);

// Same as apply_override, with the value given as command-line text.
// Numeric and boolean keys parse their text as JSON.
void apply_flag(RunConfig& cfg, const std::string& key, std::string_view text,
                const std::filesystem::path& base_dir);

// Every accepted config key, sorted.
std::vector<std::string> run_config_keys();

// Throws InvalidArgument for inconsistent settings.
void validate_run_config(const RunConfig& cfg);

struct EntryResult {
  std::size_t entry_index = 0;  // position in the main corpus
  std::string prompt_digest;
  std::string translation;
  std::string reference;
  std::string source;  // sentence shown to the model
  std::optional<std::string> gloss;
  std::optional<std::string> segmentation;
  std::string method;
  std::optional<std::string> error;
  std::vector<std::string> warnings;
};

struct RunTiming {
  std::int64_t wall_ms = 0;
  std::int64_t translation_requests = 0;
  std::int64_t glossing_requests = 0;
  std::int64_t network_calls = 0;
  std::int64_t cache_hits = 0;
};

struct RunResult {
  std::string language;
  std::string corpus_name;
  Strategy strategy = Strategy::kFewShot;
  Direction direction = Direction::kToEnglish;
  std::size_t n_support = 0;
  std::vector<EntryResult> per_entry;  // ascending entry_index
  std::vector<ScoreReport> scores;
  std::string config_digest;
  RunTiming timing;  // not part of the serialized result

  std::size_t failed_entries() const;
  std::vector<std::string> hypotheses() const;
  std::vector<std::string> references() const;
};

// Deterministic JSON: timing is left out.
nlohmann::ordered_json to_json(const RunResult& result);
RunResult run_result_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RunTiming& timing);

// Carries the result of a run whose failure rate exceeded 50%.
class RunFailed : public RunFailure {
 public:
  RunFailed(const std::string& message, RunResult result)
      : RunFailure(message), result_(std::move(result)) {}
  const RunResult& result() const { return result_; }

 private:
  RunResult result_;
};

struct RunClients {
  std::shared_ptr<CompletionClient> translation;
  std::shared_ptr<CompletionClient> glossing;  // may be null
};

// Builds replay or live clients sharing one cache directory.
RunClients make_clients(const RunConfig& cfg,
                        std::shared_ptr<HttpTransport> transport = nullptr);

std::string config_digest(const RunConfig& cfg);

// "word translation" per line; repeated words accumulate translations.
std::vector<DictionaryEntry> load_dictionary(std::string_view content);
// Entries for the words of `sentence` found in `dictionary`, in sentence
// order, without repeats.
std::vector<DictionaryEntry> lookup_dictionary(
    const std::vector<DictionaryEntry>& dictionary, std::string_view sentence);

RunResult run_experiment(const RunConfig& cfg);
RunResult run_experiment(const RunConfig& cfg, const RunClients& clients);

inline const std::vector<std::size_t> kDefaultNShotGrid{3,  9,  15, 21,
                                                        27, 33, 39, 45};

// One run per n over a shared eval split; fails before any run if an n
// exceeds the support pool.
std::vector<std::pair<std::size_t, RunResult>> ablate_nshot(
    const RunConfig& cfg, const std::vector<std::size_t>& ns);
std::vector<std::pair<std::size_t, RunResult>> ablate_nshot(
    const RunConfig& cfg, const std::vector<std::size_t>& ns,
    const RunClients& clients);

struct SignificanceRow {
  std::string metric;
  double score_a = 0.0;
  double score_b = 0.0;
  double mean_delta = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

std::vector<SignificanceRow> compare_runs(
    const RunResult& a, const RunResult& b, const BootstrapConfig& cfg,
    const std::vector<Metric>& metrics = {Metric::kBleu, Metric::kChrfPP});

// Writes run_result.json, timing.json and report.csv into `dir`.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace glossmt
