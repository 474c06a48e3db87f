// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt_tools/goldens.hpp"

#include "glossmt/corpus.hpp"
#include "glossmt/report.hpp"
#include "glossmt/runner.hpp"

#include <algorithm>
#include <fstream>

namespace glossmt::tools {

namespace fs = std::filesystem;

fs::path golden_dir(const fs::path& root) { return root / "tests" / "goldens"; }

std::string render_golden_prompt(const PromptMessages& messages) {
  return "=== system ===\n" + messages.system + "\n=== user ===\n" +
         messages.user + "\n";
}

std::vector<GoldenFile> golden_prompt_files(const fs::path& root) {
  const fs::path mini = root / "data" / "mini";
  Corpus corpus = load_corpus_file(mini / "mini.jsonl", CorpusFormat::kJsonl,
                                   CorpusInfo{"swa", "en", "mini"})
                      .corpus;
  const IgtEntry& input = corpus.entries.at(2);
  auto to_en = load_dictionary(read_file(mini / "dict.swa-en.txt"));
  auto from_en = load_dictionary(read_file(mini / "dict.en-swa.txt"));

  std::vector<GoldenFile> files;
  for (Direction direction : {Direction::kToEnglish, Direction::kFromEnglish}) {
    bool to_english = direction == Direction::kToEnglish;
    for (Strategy s : kAllStrategies) {
      PromptRequest req;
      req.strategy = s;
      req.direction = direction;
      req.input = input;
      req.source_language_name = "Swahili";
      if (!is_zero_support(s)) {
        req.support.assign(corpus.entries.begin(), corpus.entries.begin() + 2);
      }
      if (s == Strategy::kModelGloss) {
        // Stand-in for a glossing model's output: one morpheme short.
        req.input_gloss_override =
            parse_gloss_line("PL-child 3PL-PRS-play ball");
      } else if (needs_input_gloss(s)) {
        req.input_gloss_override = input.gloss;
      }
      if (s == Strategy::kDictBaseline) {
        req.dictionary = lookup_dictionary(
            to_english ? to_en : from_en,
            to_english ? input.transcription : input.translation);
      }
      std::string name = std::string(to_string(s)) + "." +
                         std::string(to_string(direction)) + ".n" +
                         std::to_string(req.support.size()) + ".txt";
      files.push_back({fs::path("prompts") / name,
                       render_golden_prompt(build_prompt(req))});
    }
  }
  files.push_back({fs::path("prompts") / "glossing.txt",
                   render_golden_prompt(build_glossing_prompt(
                       input.transcription, "Swahili", Segmented::kNo))});
  return files;
}

std::vector<GoldenFile> golden_run_files(const fs::path& root,
                                         int concurrency) {
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(root / "data" / "mini" /
                                              "configs")) {
    if (e.path().extension() == ".json") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  std::vector<GoldenFile> files;
  for (const auto& path : configs) {
    RunConfig cfg = load_run_config(path);
    if (cfg.backend != BackendKind::kReplay) continue;
    cfg.concurrency = concurrency;
    RunResult result = run_experiment(cfg);
    fs::path dir = fs::path("runs") / path.stem();
    files.push_back({dir / "run_result.json", to_json(result).dump(2) + "\n"});
    files.push_back(
        {dir / "report.csv",
         render_report(std::span<const RunResult>(&result, 1),
                       ReportFormat::kCsv)});
  }
  return files;
}

std::vector<fs::path> check_golden_files(const fs::path& root,
                                         const std::vector<GoldenFile>& files) {
  std::vector<fs::path> bad;
  for (const auto& f : files) {
    fs::path path = golden_dir(root) / f.relative;
    std::ifstream in(path, std::ios::binary);
    std::string on_disk((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) on_disk.clear();
    if (!fs::exists(path) || on_disk != f.content) bad.push_back(f.relative);
  }
  return bad;
}

void bless_golden_files(const fs::path& root,
                        const std::vector<GoldenFile>& files) {
  for (const auto& f : files) {
    fs::path path = golden_dir(root) / f.relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << f.content;
    if (!out) throw Error("cannot write " + path.string());
  }
}

}  // namespace glossmt::tools
