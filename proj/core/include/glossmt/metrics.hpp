// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/http.hpp"
#include "glossmt/igt.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace glossmt {

// Corpus metrics follow sacreBLEU conventions (13a tokenization, "exp"
// smoothing, chrF++ with eps smoothing) so scores are comparable with
// published numbers. All corpus scores are in [0, 100].

struct ScoreReport {
  std::string metric_name;
  double corpus_score = 0.0;
  std::size_t sentence_count = 0;
  // Human-readable signature of every setting that affects the score.
  std::string config_digest;
};

enum class BleuTokenize { kIntl13a, kNone };
enum class BleuSmoothing { kExpDecay, kNone };

struct BleuConfig {
  int max_ngram_order = 4;
  BleuTokenize tokenization = BleuTokenize::kIntl13a;
  BleuSmoothing smoothing = BleuSmoothing::kExpDecay;

  std::string signature() const;
};

struct ChrfConfig {
  int char_order = 6;
  int word_order = 2;
  double beta = 2.0;

  std::string signature() const;
};

struct BootstrapConfig {
  int resamples = 1000;
  std::uint64_t seed = 12345;
  double alpha = 0.05;
};

// mteval-v13a compatible tokenizer.
std::string tokenize_13a(std::string_view line);

// Sufficient statistics; corpus BLEU is computed from their sum.
struct BleuStats {
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
  std::vector<std::int64_t> correct;
  std::vector<std::int64_t> total;

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats bleu_sentence_stats(std::string_view hypothesis,
                              std::string_view reference,
                              const BleuConfig& cfg = {});
double bleu_from_stats(const BleuStats& stats, const BleuConfig& cfg = {});

// Throws InvalidArgument on length mismatch or empty input.
ScoreReport bleu(std::span<const std::string> hypotheses,
                 std::span<const std::string> references,
                 const BleuConfig& cfg = {});

// [hyp, ref, match] per order: char orders first, then word orders.
struct ChrfStats {
  std::vector<std::int64_t> counts;

  ChrfStats& operator+=(const ChrfStats& other);
};

ChrfStats chrf_sentence_stats(std::string_view hypothesis,
                              std::string_view reference,
                              const ChrfConfig& cfg = {});
double chrf_from_stats(const ChrfStats& stats, const ChrfConfig& cfg = {});

ScoreReport chrf_pp(std::span<const std::string> hypotheses,
                    std::span<const std::string> references,
                    const ChrfConfig& cfg = {});

// Position-wise word match rate in [0, 1]. Throws on empty gold.
double gloss_word_accuracy(const GlossLine& pred, const GlossLine& gold);
// Position-wise morpheme match rate within aligned words, in [0, 1].
double gloss_morpheme_accuracy(const GlossLine& pred, const GlossLine& gold);

enum class Metric { kBleu, kChrfPP };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

// splitmix64. below(n) maps the 64-bit output to [0, n) as
// floor(x * n / 2^64).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
};

// cfg.resamples draws of n indices each, taken sequentially from one
// SplitMix64 stream seeded with cfg.seed.
std::vector<std::vector<std::size_t>> bootstrap_indices(
    std::size_t n, const BootstrapConfig& cfg);

struct BootstrapResult {
  double score_a = 0.0;
  double score_b = 0.0;
  // Mean over resamples of score_b - score_a.
  double mean_delta = 0.0;
  // Share of resamples in which the observed winner does not win.
  double p_value = 1.0;
  bool significant = false;
};

BootstrapResult paired_bootstrap(std::span<const std::string> hyps_a,
                                 std::span<const std::string> hyps_b,
                                 std::span<const std::string> references,
                                 Metric metric, const BootstrapConfig& cfg,
                                 const BleuConfig& bleu_cfg = {},
                                 const ChrfConfig& chrf_cfg = {});

struct ExternalScorerConfig {
  std::string url;
  std::string name = "external";
};

// Forwards the corpus to a scoring service and returns its score as is.
ScoreReport external_score(std::span<const std::string> hypotheses,
                           std::span<const std::string> references,
                           std::span<const std::string> sources,
                           const ExternalScorerConfig& cfg,
                           HttpTransport& transport);

}  // namespace glossmt
