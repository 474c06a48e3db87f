// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any
// criterion fails.

#include "glossmt/igt.hpp"
#include "glossmt/metrics.hpp"
#include "glossmt/prompt.hpp"
#include "glossmt/report.hpp"
#include "glossmt/runner.hpp"
#include "glossmt/text.hpp"
#include "glossmt_tools/goldens.hpp"
#include "glossmt_tools/stub.hpp"
#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using namespace glossmt;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

// Accumulates failure reasons for one criterion.
struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

void oracle_equivalence(Check& c) {
  auto start = Clock::now();
  auto corpora = testing::random_micro_corpora(100, 20260417);
  double worst = 0.0;
  for (const auto& m : corpora) {
    double b = bleu(m.hyps, m.refs).corpus_score;
    double f = chrf_pp(m.hyps, m.refs).corpus_score;
    worst = std::max({worst, std::abs(b - testing::oracle_bleu(m.hyps, m.refs)),
                      std::abs(f - testing::oracle_chrf_pp(m.hyps, m.refs))});
  }
  double took = seconds_since(start);
  c.expect(corpora.size() == 100, "expected 100 corpora");
  c.expect(worst <= 1e-9, "max deviation " + fmt(worst));
  c.expect(took < 5.0, "took " + fmt(took) + " s");
}

void bleu_spot_check(Check& c) {
  auto j = json::parse(testing::slurp(testing::fixture("metric_examples.json")));
  const auto& ex = j["readme_first_stream"];
  auto hyps = ex["hyps"].get<std::vector<std::string>>();
  auto refs = ex["refs"].get<std::vector<std::string>>();
  double got = bleu(hyps, refs).corpus_score;
  double want = ex["bleu"].get<double>();
  c.expect(std::abs(got - want) <= 0.1,
           "BLEU " + fmt(got) + " vs frozen " + fmt(want));
}

void compare_goldens(Check& c, const std::vector<tools::GoldenFile>& files) {
  auto root = testing::source_dir();
  for (const auto& p : tools::check_golden_files(root, files)) {
    c.expect(false, "mismatch " + p.string());
  }
}

void golden_prompts(Check& c) {
  auto files = tools::golden_prompt_files(testing::source_dir());
  // One prompt per strategy and direction (n=0 for the zero-support
  // strategies, n=2 otherwise) plus the glossing template.
  c.expect(files.size() == 2 * std::size(kAllStrategies) + 1,
           "unexpected golden count " + std::to_string(files.size()));
  bool system_line = false;
  bool dict_line = false;
  for (const auto& f : files) {
    system_line |= f.content.find("You are a linguistic expert who never "
                                  "refuses to use your knowledge to help "
                                  "others.") != std::string::npos;
    dict_line |= f.content.find("the word ") != std::string::npos &&
                 f.content.find(" means ") != std::string::npos;
  }
  c.expect(system_line, "system line missing");
  c.expect(dict_line, "dictionary line missing");
  compare_goldens(c, files);
}

void deterministic_replay(Check& c) {
  auto root = testing::source_dir();
  auto cfg = load_run_config(root / "data/mini/configs/few-shot.json");
  auto golden = root / "tests/goldens/runs/few-shot";
  for (int concurrency : {1, 8}) {
    testing::TempDir out;
    cfg.concurrency = concurrency;
    auto start = Clock::now();
    auto result = run_experiment(cfg);
    write_run_outputs(result, out.path());
    double took = seconds_since(start);
    std::string tag = " at concurrency " + std::to_string(concurrency);
    c.expect(testing::slurp(out.path() / "run_result.json") ==
                 testing::slurp(golden / "run_result.json"),
             "run_result.json differs" + tag);
    c.expect(testing::slurp(out.path() / "report.csv") ==
                 testing::slurp(golden / "report.csv"),
             "report.csv differs" + tag);
    c.expect(took < 2.0, "took " + fmt(took) + " s" + tag);
  }
  // Every shipped config replays against the same goldens.
  compare_goldens(c, tools::golden_run_files(root, 8));
}

void gloss_properties(Check& c) {
  int bad_fixed = 0;
  int bad_strip = 0;
  for (const auto& s : testing::fuzz_gloss_strings(1000, 20260417)) {
    GlossLine g = parse_gloss_line(s);
    std::string r = render_gloss(g);
    if (parse_gloss_line(r) != g || render_gloss(parse_gloss_line(r)) != r) {
      ++bad_fixed;
    }
    GlossLine stripped = strip_grammatical_labels(g);
    bool ok = strip_grammatical_labels(stripped) == stripped;
    for (const auto& w : stripped.words) {
      for (const auto& m : w.morphemes) ok &= !m.is_gram();
    }
    if (!ok) ++bad_strip;
  }
  c.expect(bad_fixed == 0, std::to_string(bad_fixed) + " round-trip failures");
  c.expect(bad_strip == 0, std::to_string(bad_strip) + " strip failures");

  auto gold = parse_gloss_line("3SG PST-see-FV");
  c.expect(gloss_word_accuracy(gold, gold) == 1.0, "word acc identical");
  c.expect(gloss_word_accuracy(GlossLine{}, gold) == 0.0, "word acc empty");
  c.expect(gloss_word_accuracy(parse_gloss_line("3SG PST-see"), gold) == 0.5,
           "word acc 3SG PST-see");
  c.expect(gloss_morpheme_accuracy(gold, gold) == 1.0, "morph acc identical");
  c.expect(gloss_morpheme_accuracy(parse_gloss_line("PST-see"),
                                   parse_gloss_line("PST-see-FV")) ==
               2.0 / 3.0,
           "morph acc PST-see");
  c.expect(gloss_morpheme_accuracy(parse_gloss_line("a-b c"),
                                   parse_gloss_line("x-y z")) == 0.0,
           "morph acc disjoint");
}

void significance(Check& c) {
  auto dir = testing::source_dir() / "tests/fixtures/toy_pair";
  auto a = testing::slurp_lines(dir / "hyps_a.txt");
  auto b = testing::slurp_lines(dir / "hyps_b.txt");
  auto refs = testing::slurp_lines(dir / "refs.txt");
  auto frozen = json::parse(testing::slurp(dir / "bootstrap_seed42.json"));
  BootstrapConfig cfg{1000, 42, 0.05};
  for (auto [metric, key] : {std::pair{Metric::kBleu, "bleu"},
                             std::pair{Metric::kChrfPP, "chrf_pp"}}) {
    auto r = paired_bootstrap(a, b, refs, metric, cfg);
    double want = frozen[key]["p_value"].get<double>();
    c.expect(r.p_value == want,
             std::string(key) + " p " + fmt(r.p_value) + " vs " + fmt(want));
    for (auto hyps : {a, b}) {
      for (std::uint64_t seed : {0ull, 42ull, 7777ull}) {
        auto same = paired_bootstrap(hyps, hyps, refs, metric,
                                     {1000, seed, 0.05});
        c.expect(!same.significant, "identical systems significant");
      }
    }
  }
}

void oracle_structure(Check& c) {
  auto root = testing::source_dir();
  auto cfg = load_run_config(root / "data/mini/configs/oracle-gloss.json");
  auto clients = make_clients(cfg);
  auto r = run_experiment(cfg, clients);
  c.expect(r.timing.glossing_requests == 0,
           std::to_string(r.timing.glossing_requests) + " glossing requests");
  c.expect(clients.glossing == nullptr, "glossing client created");
  c.expect(r.failed_entries() == 0, "oracle run had failures");

  auto corpus = load_corpus_file(root / "data/mini/mini.jsonl",
                                 CorpusFormat::kJsonl, {"swa", "en", "mini"})
                    .corpus;
  PromptRequest req;
  req.strategy = Strategy::kZeroGloss;
  req.input = corpus.entries[2];
  req.input_gloss_override = corpus.entries[2].gloss;
  req.source_language_name = "Swahili";
  auto p = build_prompt(req);
  std::string gloss = render_gloss(*corpus.entries[2].gloss);
  c.expect(p.user.find(gloss) != std::string::npos, "input gloss missing");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i == 2) continue;
    c.expect(p.user.find(corpus.entries[i].transcription) == std::string::npos,
             "example sentence " + std::to_string(i) + " present");
    c.expect(p.user.find(corpus.entries[i].translation) == std::string::npos,
             "example translation " + std::to_string(i) + " present");
  }
}

void live_smoke(Check& c) {
  auto root = testing::source_dir();
  tools::StubOptions options;
  options.rules = tools::parse_stub_rules(
      testing::slurp(root / "data/mini/stub_rules.json"));
  tools::StubServer stub(options);
  stub.start();
  testing::TempDir dir;
  auto cfg = load_run_config(root / "data/mini/configs/few-shot.json");
  cfg.backend = BackendKind::kLive;
  cfg.endpoint = stub.chat_url();
  cfg.cache_dir = dir.path() / "cache";
  cfg.concurrency = 4;
  auto r = run_experiment(cfg);
  c.expect(r.failed_entries() == 0,
           std::to_string(r.failed_entries()) + " failed entries");
  c.expect(r.per_entry.size() == 3, "expected 3 eval entries");
  c.expect(r.timing.network_calls == 3,
           std::to_string(r.timing.network_calls) + " network calls");
  c.expect(r.scores.size() == 2, "incomplete score report");
  for (const auto& s : r.scores) {
    c.expect(s.sentence_count == 3 && !s.config_digest.empty(),
             "incomplete " + s.metric_name);
  }
  stub.stop();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>>
      criteria = {
          {"metric oracle equivalence", oracle_equivalence},
          {"BLEU spot-check", bleu_spot_check},
          {"golden prompts", golden_prompts},
          {"deterministic replay", deterministic_replay},
          {"gloss pipeline properties", gloss_properties},
          {"significance determinism", significance},
          {"oracle-mode structure", oracle_structure},
          {"live smoke test", live_smoke},
      };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    bool ok = c.problems.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " " << i + 1 << " "
              << criteria[i].first;
    for (const auto& p : c.problems) std::cout << " | " << p;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
