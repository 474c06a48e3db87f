// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/metrics.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

namespace {

std::vector<std::string> synth(std::size_t n, std::uint32_t seed) {
  static const char* kWords[] = {"the", "cat", "sat", "on", "mat", "a",
                                 "dog", "ran", "to", "house", "big", "red",
                                 "tree", "and", "then", "slept."};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(5, 25);
  std::uniform_int_distribution<int> word(0, 15);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    for (int k = len(rng); k > 0; --k) {
      if (!s.empty()) s += ' ';
      s += kWords[word(rng)];
    }
    out.push_back(std::move(s));
  }
  return out;
}

void BM_Bleu(benchmark::State& state) {
  auto hyps = synth(static_cast<std::size_t>(state.range(0)), 1);
  auto refs = synth(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glossmt::bleu(hyps, refs).corpus_score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bleu)->Arg(100)->Arg(1000);

void BM_ChrfPP(benchmark::State& state) {
  auto hyps = synth(static_cast<std::size_t>(state.range(0)), 3);
  auto refs = synth(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glossmt::chrf_pp(hyps, refs).corpus_score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChrfPP)->Arg(100)->Arg(1000);

void BM_Tokenize13a(benchmark::State& state) {
  std::string line =
      "Juma shot an elephant, last night (at 10.30pm) -- \"quickly\"!";
  for (auto _ : state) {
    benchmark::DoNotOptimize(glossmt::tokenize_13a(line));
  }
}
BENCHMARK(BM_Tokenize13a);

void BM_PairedBootstrap(benchmark::State& state) {
  auto a = synth(200, 5);
  auto b = synth(200, 6);
  auto refs = synth(200, 7);
  glossmt::BootstrapConfig cfg;
  cfg.resamples = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        glossmt::paired_bootstrap(a, b, refs, glossmt::Metric::kBleu, cfg)
            .p_value);
  }
}
BENCHMARK(BM_PairedBootstrap)->Unit(benchmark::kMillisecond);

}  // namespace
