// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/metrics.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace glossmt {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Characters split off by the first 13a rule.
bool is_13a_punct(char c) {
  return (c >= '{' && c <= '~') || (c >= '[' && c <= '`') ||
         (c >= ' ' && c <= '&') || (c >= '(' && c <= '+') ||
         (c >= ':' && c <= '@') || c == '/';
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::vector<std::string> py_words(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& w : text::py_split(text::to_utf32(s))) {
    out.push_back(text::to_utf8(w));
  }
  return out;
}

std::string rstrip_py(std::string_view s) {
  std::u32string cps = text::to_utf32(s);
  while (!cps.empty() && text::is_py_space(cps.back())) cps.pop_back();
  return text::to_utf8(cps);
}

std::vector<std::string> bleu_tokens(std::string_view sentence,
                                     const BleuConfig& cfg) {
  std::string s = rstrip_py(sentence);
  if (cfg.tokenization == BleuTokenize::kIntl13a) s = tokenize_13a(s);
  return py_words(s);
}

using NgramCounts = std::unordered_map<std::string, std::int64_t>;

// Keys join tokens with ' ', so different orders never collide.
NgramCounts word_ngrams(const std::vector<std::string>& tokens, int min_order,
                        int max_order) {
  NgramCounts counts;
  for (int n = min_order; n <= max_order; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (int k = 1; k < n; ++k) {
        key.push_back(' ');
        key += tokens[i + k];
      }
      ++counts[key];
    }
  }
  return counts;
}

int ngram_order(const std::string& key) {
  int n = 1;
  for (char c : key) n += c == ' ';
  return n;
}

void check_corpus(std::size_t hyps, std::size_t refs) {
  if (hyps != refs) {
    throw InvalidArgument("hypothesis/reference count mismatch " +
                          std::to_string(hyps) + " vs " + std::to_string(refs));
  }
  if (hyps == 0) throw InvalidArgument("empty corpus");
}

constexpr std::u32string_view kPuncts = U"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_chrf_punct(char32_t c) {
  return kPuncts.find(c) != std::u32string_view::npos;
}

std::vector<std::u32string> chrf_words(std::u32string_view sentence) {
  std::vector<std::u32string> out;
  for (auto& w : text::py_split(sentence)) {
    if (w.size() == 1) {
      out.push_back(std::move(w));
    } else if (is_chrf_punct(w.back())) {
      out.push_back(w.substr(0, w.size() - 1));
      out.push_back(w.substr(w.size() - 1));
    } else if (is_chrf_punct(w.front())) {
      out.push_back(w.substr(0, 1));
      out.push_back(w.substr(1));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

using U32Counts = std::unordered_map<std::u32string, std::int64_t>;

U32Counts char_ngrams(std::u32string_view line, int n) {
  U32Counts counts;
  for (std::size_t i = 0; i + n <= line.size(); ++i) {
    ++counts[std::u32string(line.substr(i, n))];
  }
  return counts;
}

U32Counts word_ngrams_u32(const std::vector<std::u32string>& words, int n) {
  U32Counts counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::u32string key = words[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(U' ');
      key += words[i + k];
    }
    ++counts[key];
  }
  return counts;
}

void append_match_stats(const U32Counts& hyp, const U32Counts& ref,
                        std::vector<std::int64_t>& out) {
  std::int64_t hyp_count = 0;
  std::int64_t match = 0;
  for (const auto& [gram, count] : hyp) {
    hyp_count += count;
    auto it = ref.find(gram);
    if (it != ref.end()) match += std::min(count, it->second);
  }
  std::int64_t ref_count = 0;
  for (const auto& [gram, count] : ref) ref_count += count;
  // A hypothesis gets no credit for an order the reference lacks.
  out.push_back(ref.empty() ? 0 : hyp_count);
  out.push_back(ref_count);
  out.push_back(match);
}

std::u32string strip_spaces(std::u32string_view s) {
  std::u32string out;
  for (const auto& w : text::py_split(s)) out += w;
  return out;
}

}  // namespace

std::string BleuConfig::signature() const {
  return std::string("bleu|nrefs:1|case:mixed|tok:") +
         (tokenization == BleuTokenize::kIntl13a ? "13a" : "none") +
         "|smooth:" + (smoothing == BleuSmoothing::kExpDecay ? "exp" : "none") +
         "|order:" + std::to_string(max_ngram_order);
}

std::string ChrfConfig::signature() const {
  return "chrf|nrefs:1|case:mixed|nc:" + std::to_string(char_order) +
         "|nw:" + std::to_string(word_order) + "|beta:" +
         text::format_score(beta, 4) + "|eps:yes";
}

std::string tokenize_13a(std::string_view input) {
  std::string line(input);
  replace_all(line, "<skipped>", "");
  replace_all(line, "-\n", "");
  replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    replace_all(line, "&quot;", "\"");
    replace_all(line, "&amp;", "&");
    replace_all(line, "&lt;", "<");
    replace_all(line, "&gt;", ">");
  }
  line = " " + line + " ";

  std::string a;
  a.reserve(line.size() * 2);
  for (char c : line) {
    if (is_13a_punct(c)) {
      a.push_back(' ');
      a.push_back(c);
      a.push_back(' ');
    } else {
      a.push_back(c);
    }
  }

  // Each remaining rule matches two characters, left to right, without
  // overlapping, like re.sub.
  const auto two_char_rule = [](const std::string& in, auto matches,
                                auto emit) {
    std::string out;
    out.reserve(in.size() + in.size() / 2);
    std::size_t i = 0;
    while (i < in.size()) {
      if (i + 1 < in.size() && matches(in[i], in[i + 1])) {
        emit(out, in[i], in[i + 1]);
        i += 2;
      } else {
        out.push_back(in[i]);
        ++i;
      }
    }
    return out;
  };
  const auto is_pc = [](char c) { return c == '.' || c == ','; };

  std::string b = two_char_rule(
      a, [&](char x, char y) { return !is_digit(x) && is_pc(y); },
      [](std::string& o, char x, char y) {
        o.push_back(x);
        o.push_back(' ');
        o.push_back(y);
        o.push_back(' ');
      });
  std::string c = two_char_rule(
      b, [&](char x, char y) { return is_pc(x) && !is_digit(y); },
      [](std::string& o, char x, char y) {
        o.push_back(' ');
        o.push_back(x);
        o.push_back(' ');
        o.push_back(y);
      });
  std::string d = two_char_rule(
      c, [&](char x, char y) { return is_digit(x) && y == '-'; },
      [](std::string& o, char x, char y) {
        o.push_back(x);
        o.push_back(' ');
        o.push_back(y);
        o.push_back(' ');
      });

  std::string out;
  for (const auto& w : py_words(d)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  if (correct.size() < other.correct.size()) {
    correct.resize(other.correct.size());
    total.resize(other.total.size());
  }
  for (std::size_t i = 0; i < other.correct.size(); ++i) {
    correct[i] += other.correct[i];
    total[i] += other.total[i];
  }
  return *this;
}

BleuStats bleu_sentence_stats(std::string_view hypothesis,
                              std::string_view reference,
                              const BleuConfig& cfg) {
  const int order = cfg.max_ngram_order;
  const auto hyp_tokens = bleu_tokens(hypothesis, cfg);
  const auto ref_tokens = bleu_tokens(reference, cfg);
  const NgramCounts hyp = word_ngrams(hyp_tokens, 1, order);
  const NgramCounts ref = word_ngrams(ref_tokens, 1, order);

  BleuStats stats;
  stats.hyp_len = static_cast<std::int64_t>(hyp_tokens.size());
  stats.ref_len = static_cast<std::int64_t>(ref_tokens.size());
  stats.correct.assign(order, 0);
  stats.total.assign(order, 0);
  for (const auto& [gram, count] : hyp) {
    const int n = ngram_order(gram) - 1;
    stats.total[n] += count;
    auto it = ref.find(gram);
    if (it != ref.end()) stats.correct[n] += std::min(count, it->second);
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats, const BleuConfig& cfg) {
  const int order = cfg.max_ngram_order;
  double bp = 1.0;
  if (stats.hyp_len < stats.ref_len) {
    bp = stats.hyp_len > 0
             ? std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                  static_cast<double>(stats.hyp_len))
             : 0.0;
  }
  bool any_match = false;
  for (auto c : stats.correct) any_match = any_match || c != 0;
  if (!any_match) return 0.0;

  std::vector<double> precisions(order, 0.0);
  double smooth = 1.0;
  for (int n = 0; n < order; ++n) {
    const auto total = n < static_cast<int>(stats.total.size()) ? stats.total[n] : 0;
    const auto correct =
        n < static_cast<int>(stats.correct.size()) ? stats.correct[n] : 0;
    if (total == 0) break;
    if (correct == 0) {
      if (cfg.smoothing == BleuSmoothing::kExpDecay) {
        smooth *= 2.0;
        precisions[n] = 100.0 / (smooth * static_cast<double>(total));
      }
    } else {
      precisions[n] =
          100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
  }
  double log_sum = 0.0;
  for (double p : precisions) {
    log_sum += p == 0.0 ? -9999999999.0 : std::log(p);
  }
  // exp(log(100)) can land a few ulps above 100.
  return std::clamp(bp * std::exp(log_sum / order), 0.0, 100.0);
}

ScoreReport bleu(std::span<const std::string> hypotheses,
                 std::span<const std::string> references,
                 const BleuConfig& cfg) {
  check_corpus(hypotheses.size(), references.size());
  if (cfg.max_ngram_order < 1) {
    throw InvalidArgument("max_ngram_order must be at least 1");
  }
  BleuStats total;
  total.correct.assign(cfg.max_ngram_order, 0);
  total.total.assign(cfg.max_ngram_order, 0);
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    total += bleu_sentence_stats(hypotheses[i], references[i], cfg);
  }
  return {"BLEU", bleu_from_stats(total, cfg), hypotheses.size(),
          cfg.signature()};
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size());
  for (std::size_t i = 0; i < other.counts.size(); ++i) {
    counts[i] += other.counts[i];
  }
  return *this;
}

ChrfStats chrf_sentence_stats(std::string_view hypothesis,
                              std::string_view reference,
                              const ChrfConfig& cfg) {
  const std::u32string hyp = text::to_utf32(hypothesis);
  const std::u32string ref = text::to_utf32(reference);
  const std::u32string hyp_chars = strip_spaces(hyp);
  const std::u32string ref_chars = strip_spaces(ref);

  ChrfStats stats;
  stats.counts.reserve(3 * (cfg.char_order + cfg.word_order));
  for (int n = 1; n <= cfg.char_order; ++n) {
    append_match_stats(char_ngrams(hyp_chars, n), char_ngrams(ref_chars, n),
                       stats.counts);
  }
  if (cfg.word_order > 0) {
    const auto hyp_words = chrf_words(hyp);
    const auto ref_words = chrf_words(ref);
    for (int n = 1; n <= cfg.word_order; ++n) {
      append_match_stats(word_ngrams_u32(hyp_words, n),
                         word_ngrams_u32(ref_words, n), stats.counts);
    }
  }
  return stats;
}

double chrf_from_stats(const ChrfStats& stats, const ChrfConfig& cfg) {
  constexpr double kEps = 1e-16;
  const int orders = cfg.char_order + cfg.word_order;
  const double factor = cfg.beta * cfg.beta;
  double score = 0.0;
  for (int i = 0; i < orders; ++i) {
    const auto idx = static_cast<std::size_t>(3 * i);
    const double n_hyp = idx < stats.counts.size() ? stats.counts[idx] : 0;
    const double n_ref = idx + 1 < stats.counts.size() ? stats.counts[idx + 1] : 0;
    const double n_match = idx + 2 < stats.counts.size() ? stats.counts[idx + 2] : 0;
    const double prec = n_hyp > 0 ? n_match / n_hyp : kEps;
    const double rec = n_ref > 0 ? n_match / n_ref : kEps;
    const double denom = factor * prec + rec;
    score += denom > 0 ? (1 + factor) * prec * rec / denom : kEps;
  }
  return std::clamp(100.0 * score / orders, 0.0, 100.0);
}

ScoreReport chrf_pp(std::span<const std::string> hypotheses,
                    std::span<const std::string> references,
                    const ChrfConfig& cfg) {
  check_corpus(hypotheses.size(), references.size());
  if (cfg.char_order < 1 || cfg.word_order < 0 || !(cfg.beta > 0)) {
    throw InvalidArgument("invalid chrF configuration");
  }
  ChrfStats total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    total += chrf_sentence_stats(hypotheses[i], references[i], cfg);
  }
  return {"chrF++", chrf_from_stats(total, cfg), hypotheses.size(),
          cfg.signature()};
}

double gloss_word_accuracy(const GlossLine& pred, const GlossLine& gold) {
  if (gold.words.empty()) {
    throw InvalidArgument("gold gloss has no words");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.words.size() && i < pred.words.size(); ++i) {
    if (text::nfc(render_gloss_word(pred.words[i])) ==
        text::nfc(render_gloss_word(gold.words[i]))) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gold.words.size());
}

double gloss_morpheme_accuracy(const GlossLine& pred, const GlossLine& gold) {
  const std::size_t total = gold.morpheme_count();
  if (total == 0) throw InvalidArgument("gold gloss has no morphemes");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.words.size() && i < pred.words.size(); ++i) {
    const auto& g = gold.words[i].morphemes;
    const auto& p = pred.words[i].morphemes;
    for (std::size_t j = 0; j < g.size() && j < p.size(); ++j) {
      if (text::nfc(p[j].surface) == text::nfc(g[j].surface)) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::string_view to_string(Metric metric) {
  return metric == Metric::kBleu ? "bleu" : "chrf++";
}

Metric parse_metric(std::string_view name) {
  if (name == "bleu" || name == "BLEU") return Metric::kBleu;
  if (name == "chrf++" || name == "chrF++" || name == "chrfpp") {
    return Metric::kChrfPP;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) +
                        "' (expected bleu or chrf++)");
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t SplitMix64::below(std::size_t n) {
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n);
  return static_cast<std::size_t>(wide >> 64);
}

std::vector<std::vector<std::size_t>> bootstrap_indices(
    std::size_t n, const BootstrapConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  std::vector<std::vector<std::size_t>> draws(
      static_cast<std::size_t>(cfg.resamples));
  for (auto& draw : draws) {
    draw.resize(n);
    for (auto& idx : draw) idx = rng.below(n);
  }
  return draws;
}

BootstrapResult paired_bootstrap(std::span<const std::string> hyps_a,
                                 std::span<const std::string> hyps_b,
                                 std::span<const std::string> references,
                                 Metric metric, const BootstrapConfig& cfg,
                                 const BleuConfig& bleu_cfg,
                                 const ChrfConfig& chrf_cfg) {
  const std::size_t n = references.size();
  if (hyps_a.size() != n || hyps_b.size() != n) {
    throw InvalidArgument("paired bootstrap needs equal-length inputs, got " +
                          std::to_string(hyps_a.size()) + ", " +
                          std::to_string(hyps_b.size()) + ", " +
                          std::to_string(n));
  }
  if (n < 2) throw InvalidArgument("paired bootstrap needs at least 2 sentences");
  if (cfg.resamples < 1) throw InvalidArgument("resamples must be at least 1");

  // Per-sentence sufficient statistics, summed per resample.
  std::function<double(const std::vector<std::size_t>*, bool)> score;
  std::vector<BleuStats> bleu_a, bleu_b;
  std::vector<ChrfStats> chrf_a, chrf_b;
  if (metric == Metric::kBleu) {
    for (std::size_t i = 0; i < n; ++i) {
      bleu_a.push_back(bleu_sentence_stats(hyps_a[i], references[i], bleu_cfg));
      bleu_b.push_back(bleu_sentence_stats(hyps_b[i], references[i], bleu_cfg));
    }
    score = [&](const std::vector<std::size_t>* idx, bool use_b) {
      const auto& per = use_b ? bleu_b : bleu_a;
      BleuStats sum;
      sum.correct.assign(bleu_cfg.max_ngram_order, 0);
      sum.total.assign(bleu_cfg.max_ngram_order, 0);
      if (idx == nullptr) {
        for (const auto& s : per) sum += s;
      } else {
        for (auto i : *idx) sum += per[i];
      }
      return bleu_from_stats(sum, bleu_cfg);
    };
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      chrf_a.push_back(chrf_sentence_stats(hyps_a[i], references[i], chrf_cfg));
      chrf_b.push_back(chrf_sentence_stats(hyps_b[i], references[i], chrf_cfg));
    }
    score = [&](const std::vector<std::size_t>* idx, bool use_b) {
      const auto& per = use_b ? chrf_b : chrf_a;
      ChrfStats sum;
      if (idx == nullptr) {
        for (const auto& s : per) sum += s;
      } else {
        for (auto i : *idx) sum += per[i];
      }
      return chrf_from_stats(sum, chrf_cfg);
    };
  }

  BootstrapResult result;
  result.score_a = score(nullptr, false);
  result.score_b = score(nullptr, true);
  const double observed = result.score_b - result.score_a;

  const auto draws = bootstrap_indices(n, cfg);
  double delta_sum = 0.0;
  std::int64_t failures = 0;
  for (const auto& draw : draws) {
    const double delta = score(&draw, true) - score(&draw, false);
    delta_sum += delta;
    if (observed > 0 ? delta <= 0 : observed < 0 ? delta >= 0 : true) {
      ++failures;
    }
  }
  result.mean_delta = delta_sum / static_cast<double>(draws.size());
  result.p_value =
      static_cast<double>(failures) / static_cast<double>(draws.size());
  result.significant = result.p_value < cfg.alpha;
  return result;
}

ScoreReport external_score(std::span<const std::string> hypotheses,
                           std::span<const std::string> references,
                           std::span<const std::string> sources,
                           const ExternalScorerConfig& cfg,
                           HttpTransport& transport) {
  if (hypotheses.empty()) throw InvalidArgument("empty corpus");
  check_corpus(hypotheses.size(), references.size());
  if (sources.size() != hypotheses.size()) {
    throw InvalidArgument("source count " + std::to_string(sources.size()) +
                          " does not match hypothesis count " +
                          std::to_string(hypotheses.size()));
  }
  if (cfg.url.empty()) throw InvalidArgument("external scorer URL is not set");

  nlohmann::json body = {
      {"sources", std::vector<std::string>(sources.begin(), sources.end())},
      {"hypotheses",
       std::vector<std::string>(hypotheses.begin(), hypotheses.end())},
      {"references",
       std::vector<std::string>(references.begin(), references.end())},
  };
  HttpResponse response = transport.post_json(cfg.url, {}, body.dump());
  if (response.status < 200 || response.status >= 300) {
    throw HttpStatusError(response.status, response.body);
  }
  double value = 0.0;
  try {
    value = nlohmann::json::parse(response.body).at("score").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed scorer response: ") + e.what());
  }
  if (!(value >= 0.0 && value <= 100.0)) {
    throw Error("scorer returned " + std::to_string(value) +
                ", outside [0, 100]");
  }
  return {cfg.name, value, hypotheses.size(), "external|url:" + cfg.url};
}

}  // namespace glossmt
