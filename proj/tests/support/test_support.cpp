// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace glossmt::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return fs::path(GLOSSMT_SOURCE_DIR); }

fs::path fixture(const std::string& relative) {
  return source_dir() / "tests" / "fixtures" / relative;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> slurp_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("glossmt-test-" + std::to_string(rd()) + "-" +
           std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

HttpResponse FakeTransport::post_json(
    const std::string& url, const std::map<std::string, std::string>& headers,
    const std::string& body) {
  int call = calls_.fetch_add(1);
  {
    std::lock_guard lock(mutex_);
    headers_.push_back(headers);
    bodies_.push_back(body);
  }
  return handler_(url, body, call);
}

std::vector<std::map<std::string, std::string>> FakeTransport::headers() const {
  std::lock_guard lock(mutex_);
  return headers_;
}

std::vector<std::string> FakeTransport::bodies() const {
  std::lock_guard lock(mutex_);
  return bodies_;
}

std::string chat_body(const std::string& content) {
  nlohmann::json j;
  j["choices"] = {{{"message", {{"role", "assistant"}, {"content", content}}}}};
  return j.dump();
}

namespace {

std::vector<std::string> words_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <typename T>
std::vector<std::vector<T>> ngrams(const std::vector<T>& seq, std::size_t n) {
  std::vector<std::vector<T>> out;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    out.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(i),
                     seq.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return out;
}

// Clipped matches: each distinct hyp n-gram contributes
// min(count in hyp, count in ref).
template <typename T>
long clipped(const std::vector<std::vector<T>>& hyp,
             const std::vector<std::vector<T>>& ref) {
  long matches = 0;
  std::vector<std::vector<T>> seen;
  for (const auto& g : hyp) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    long in_hyp = std::count(hyp.begin(), hyp.end(), g);
    long in_ref = std::count(ref.begin(), ref.end(), g);
    matches += std::min(in_hyp, in_ref);
  }
  return matches;
}

}  // namespace

double oracle_bleu(const std::vector<std::string>& hyps,
                   const std::vector<std::string>& refs) {
  long match[4] = {0, 0, 0, 0};
  long total[4] = {0, 0, 0, 0};
  long hyp_len = 0;
  long ref_len = 0;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    auto h = words_of(hyps[s]);
    auto r = words_of(refs[s]);
    hyp_len += static_cast<long>(h.size());
    ref_len += static_cast<long>(r.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      auto hg = ngrams(h, n);
      total[n - 1] += static_cast<long>(hg.size());
      match[n - 1] += clipped(hg, ngrams(r, n));
    }
  }
  if (hyp_len == 0) return 0.0;
  if (match[0] + match[1] + match[2] + match[3] == 0) return 0.0;
  // An order with no candidate n-grams at all contributes log(0).
  for (long t : total) {
    if (t == 0) return 0.0;
  }
  double log_p = 0.0;
  int zeros = 0;
  for (int n = 0; n < 4; ++n) {
    double p;
    if (match[n] == 0) {
      ++zeros;
      p = 1.0 / (std::pow(2.0, zeros) * static_cast<double>(total[n]));
    } else {
      p = static_cast<double>(match[n]) / static_cast<double>(total[n]);
    }
    log_p += std::log(p) / 4.0;
  }
  double bp = hyp_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) /
                                       static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_p);
}

double oracle_chrf_pp(const std::vector<std::string>& hyps,
                      const std::vector<std::string>& refs) {
  const double eps = 1e-16;
  const double beta2 = 4.0;
  // 6 character orders then 2 word orders: hyp count, ref count, matches.
  double stats[8][3] = {};
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    std::string hc;
    std::string rc;
    for (char ch : hyps[s]) {
      if (ch != ' ') hc += ch;
    }
    for (char ch : refs[s]) {
      if (ch != ' ') rc += ch;
    }
    std::vector<char> hv(hc.begin(), hc.end());
    std::vector<char> rv(rc.begin(), rc.end());
    auto hw = words_of(hyps[s]);
    auto rw = words_of(refs[s]);
    for (int o = 0; o < 8; ++o) {
      long nh;
      long nr;
      long m;
      if (o < 6) {
        auto hg = ngrams(hv, static_cast<std::size_t>(o + 1));
        auto rg = ngrams(rv, static_cast<std::size_t>(o + 1));
        nh = static_cast<long>(hg.size());
        nr = static_cast<long>(rg.size());
        m = clipped(hg, rg);
      } else {
        auto hg = ngrams(hw, static_cast<std::size_t>(o - 5));
        auto rg = ngrams(rw, static_cast<std::size_t>(o - 5));
        nh = static_cast<long>(hg.size());
        nr = static_cast<long>(rg.size());
        m = clipped(hg, rg);
      }
      // Hypothesis n-grams against an empty reference are not counted.
      stats[o][0] += nr > 0 ? static_cast<double>(nh) : 0.0;
      stats[o][1] += static_cast<double>(nr);
      stats[o][2] += static_cast<double>(m);
    }
  }
  double sum = 0.0;
  for (auto& st : stats) {
    double p = st[0] > 0 ? st[2] / st[0] : eps;
    double r = st[1] > 0 ? st[2] / st[1] : eps;
    double d = beta2 * p + r;
    sum += d > 0 ? (1 + beta2) * p * r / d : eps;
  }
  return 100.0 * sum / 8.0;
}

std::vector<MicroCorpus> random_micro_corpora(int count, std::uint32_t seed) {
  static const std::vector<std::string> pool = {
      "the", "cat", "sat", "on", "mat", "a", "dog", "ran", "to", "house",
      "big", "red", "tree", "slept", "and", "then", "it", "was"};
  std::mt19937 rng(seed);
  std::vector<MicroCorpus> out;
  for (int c = 0; c < count; ++c) {
    std::vector<std::string> vocab = pool;
    std::shuffle(vocab.begin(), vocab.end(), rng);
    vocab.resize(std::uniform_int_distribution<std::size_t>(1, 10)(rng));
    auto sentence = [&] {
      std::string s;
      int len = std::uniform_int_distribution<int>(0, 8)(rng);
      for (int i = 0; i < len; ++i) {
        if (!s.empty()) s += ' ';
        s += vocab[std::uniform_int_distribution<std::size_t>(
            0, vocab.size() - 1)(rng)];
      }
      return s;
    };
    MicroCorpus mc;
    int size = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < size; ++i) {
      mc.refs.push_back(sentence());
      mc.hyps.push_back(std::uniform_int_distribution<int>(0, 3)(rng) == 0
                            ? mc.refs.back()
                            : sentence());
    }
    out.push_back(std::move(mc));
  }
  return out;
}

std::vector<std::string> fuzz_gloss_strings(int count, std::uint32_t seed) {
  static const std::vector<std::string> pieces = {
      "3SG", "PST", "1PL", "FV",  "PL",  "see", "child", "eat", "ball",
      "sg",  "3sg", "NOM", "ACC", "DEM", "go",  "1",     "2",   "3",
      "be.PRS", "1SG.ERG", "Juma", "über", "house.LOC", "N1", "x"};
  static const std::vector<std::string> seps = {"-", "-", "-", "--", "-"};
  static const std::vector<std::string> gaps = {" ", " ", "  ", "\t", " \t "};
  std::mt19937 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::vector<std::string> out;
  for (int c = 0; c < count; ++c) {
    std::string s;
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) s += pick(gaps);
    int words = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int w = 0; w < words; ++w) {
      if (w > 0) s += pick(gaps);
      if (std::uniform_int_distribution<int>(0, 15)(rng) == 0) s += "-";
      int morphs = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int m = 0; m < morphs; ++m) {
        if (m > 0) s += pick(seps);
        s += pick(pieces);
      }
      if (std::uniform_int_distribution<int>(0, 15)(rng) == 0) s += "-";
    }
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) s += pick(gaps);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace glossmt::testing
