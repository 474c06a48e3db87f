// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/prompt.hpp"

#include <benchmark/benchmark.h>

namespace {

glossmt::IgtEntry entry(int i) {
  glossmt::IgtEntry e;
  e.transcription = "Watoto wanacheza mpira " + std::to_string(i);
  e.segmentation = "Wa-toto wa-na-chez-a mpira " + std::to_string(i);
  e.gloss = glossmt::parse_gloss_line("PL-child 3PL-PRS-play-FV ball");
  e.translation = "The children are playing football.";
  e.language = "swa";
  return e;
}

void BM_BuildPrompt(benchmark::State& state) {
  glossmt::PromptRequest req;
  req.strategy = glossmt::Strategy::kGlossWithSeg;
  req.source_language_name = "Swahili";
  for (int i = 0; i < state.range(0); ++i) req.support.push_back(entry(i));
  req.input = entry(-1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glossmt::build_prompt(req).user.size());
  }
}
BENCHMARK(BM_BuildPrompt)->Arg(3)->Arg(21)->Arg(45);

void BM_ParseGloss(benchmark::State& state) {
  std::string raw = "Juma 3SG-PST-3SG-shoot-FV bullet elephant yesterday night";
  for (auto _ : state) {
    benchmark::DoNotOptimize(glossmt::parse_gloss_line(raw).words.size());
  }
}
BENCHMARK(BM_ParseGloss);

}  // namespace
