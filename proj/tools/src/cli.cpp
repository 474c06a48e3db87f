// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt_tools/cli.hpp"

#include "glossmt/corpus.hpp"
#include "glossmt/http.hpp"
#include "glossmt/metrics.hpp"
#include "glossmt/report.hpp"
#include "glossmt/runner.hpp"
#include "glossmt/text.hpp"
#include "glossmt_tools/goldens.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>

namespace glossmt::tools {

namespace fs = std::filesystem;

namespace {

std::string flag_name(const std::string& key) {
  std::string out = key;
  std::replace(out.begin(), out.end(), '_', '-');
  return "--" + out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  return text::split_lines(read_file(path));
}

std::vector<std::size_t> parse_ns(const std::string& spec) {
  std::vector<std::size_t> ns;
  std::size_t start = 0;
  while (start < spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string::npos) comma = spec.size();
    std::string item(text::trim(std::string_view(spec).substr(start, comma - start)));
    if (!item.empty()) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || item.front() == '-') {
        throw InvalidArgument("--ns expects comma-separated integers");
      }
      ns.push_back(static_cast<std::size_t>(v));
    }
    start = comma + 1;
  }
  return ns;
}

struct RunFlags {
  std::string config;
  std::map<std::string, std::string> values;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  for (const auto& key : run_config_keys()) {
    cmd->add_option_function<std::string>(
        flag_name(key),
        [&flags, key](const std::string& v) { flags.values[key] = v; },
        "overrides config key " + key);
  }
}

RunConfig resolve_config(const RunFlags& flags) {
  RunConfig cfg;
  if (!flags.config.empty()) cfg = load_run_config(flags.config);
  for (const auto& [key, value] : flags.values) {
    apply_flag(cfg, key, value, fs::current_path());
  }
  if (cfg.output_dir.empty()) {
    cfg.output_dir = fs::path("runs") / (std::string(to_string(cfg.strategy)) +
                                         "." +
                                         std::string(to_string(cfg.direction)));
  }
  return cfg;
}

void print_scores(std::ostream& out, const RunResult& r) {
  for (const auto& s : r.scores) {
    out << s.metric_name << '\t' << text::format_score(s.corpus_score) << '\n';
  }
}

RunResult load_result(const fs::path& path) {
  fs::path file = fs::is_directory(path) ? path / "run_result.json" : path;
  return run_result_from_json(nlohmann::json::parse(read_file(file)));
}

int cmd_validate(const std::string& corpus, const std::string& format,
                 const std::string& target, const std::string& language,
                 std::ostream& out, std::ostream& err) {
  LoadResult loaded = load_corpus_file(corpus, parse_corpus_format(format),
                                       CorpusInfo{language, "en", ""}, target);
  std::size_t errors = 0;
  std::size_t warnings = loaded.warnings.size();
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  for (std::size_t i = 0; i < loaded.corpus.size(); ++i) {
    ValidationReport report = validate_entry(loaded.corpus.entries[i]);
    for (const auto& f : report.findings) {
      err << "entry " << i << ": "
          << (f.severity == Severity::kError ? "error" : "warning") << " ["
          << f.code << "] " << f.message << '\n';
    }
    errors += report.error_count();
    warnings += report.warning_count();
  }
  out << loaded.corpus.size() << " entries, " << errors << " errors, "
      << warnings << " warnings\n";
  return errors == 0 ? kExitOk : kExitFailure;
}

int cmd_score(const std::string& hyps_path, const std::string& refs_path,
              const std::string& metric, const std::string& sources_path,
              const std::string& scorer_url, std::ostream& out,
              std::ostream& err) {
  auto hyps = read_lines(hyps_path);
  auto refs = read_lines(refs_path);
  if (hyps.size() != refs.size()) {
    err << "error: line count mismatch: hypotheses have " << hyps.size()
        << " lines, references have " << refs.size() << " lines\n";
    return kExitUsage;
  }
  ScoreReport report;
  if (metric == "external") {
    if (scorer_url.empty()) {
      err << "error: --metric external needs --scorer-url\n";
      return kExitUsage;
    }
    std::vector<std::string> sources;
    if (!sources_path.empty()) sources = read_lines(sources_path);
    if (sources.size() != hyps.size()) {
      err << "error: line count mismatch: sources have " << sources.size()
          << " lines, hypotheses have " << hyps.size() << " lines\n";
      return kExitUsage;
    }
    auto transport = make_http_transport();
    report = external_score(hyps, refs, sources,
                            ExternalScorerConfig{scorer_url}, *transport);
  } else if (parse_metric(metric) == Metric::kBleu) {
    report = bleu(hyps, refs);
  } else {
    report = chrf_pp(hyps, refs);
  }
  out << text::format_score(report.corpus_score) << '\n';
  return kExitOk;
}

int cmd_sigtest(const std::string& a, const std::string& b,
                const std::string& refs_path, const std::string& metrics,
                const BootstrapConfig& cfg, std::ostream& out,
                std::ostream& err) {
  auto ha = read_lines(a);
  auto hb = read_lines(b);
  auto refs = read_lines(refs_path);
  if (ha.size() != refs.size() || hb.size() != refs.size()) {
    err << "error: line count mismatch: " << ha.size() << ", " << hb.size()
        << " and " << refs.size() << " lines\n";
    return kExitUsage;
  }
  RunResult ra;
  RunResult rb;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    ra.per_entry.push_back({});
    ra.per_entry.back().entry_index = i;
    ra.per_entry.back().translation = ha[i];
    ra.per_entry.back().reference = refs[i];
    rb.per_entry.push_back(ra.per_entry.back());
    rb.per_entry.back().translation = hb[i];
  }
  std::vector<Metric> ms;
  if (metrics == "all") {
    ms = {Metric::kBleu, Metric::kChrfPP};
  } else {
    ms = {parse_metric(metrics)};
  }
  auto rows = compare_runs(ra, rb, cfg, ms);
  out << render_significance(rows);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, const CliContext& ctx) {
  std::ostream& out = *ctx.out;
  std::ostream& err = *ctx.err;

  CLI::App app{"Grammar-informed LLM translation experiments", "glossmt"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  std::string corpus;
  std::string format;
  std::string target;
  std::string language;
  auto* validate = app.add_subcommand("validate", "check a corpus file");
  validate->add_option("--corpus", corpus, "corpus file")->required();
  validate->add_option("--format", format, "sigmorphon, jsonl or parallel")
      ->required();
  validate->add_option("--target", target, "target side of a parallel corpus");
  validate->add_option("--language", language, "language code");

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", run_flags.config, "run config JSON")->required();
  add_run_flags(run, run_flags);

  std::string hyps;
  std::string refs;
  std::string metric;
  std::string sources;
  std::string scorer_url;
  auto* score = app.add_subcommand("score", "score hypotheses");
  score->add_option("--hyps", hyps, "one hypothesis per line")->required();
  score->add_option("--refs", refs, "one reference per line")->required();
  score->add_option("--metric", metric, "bleu, chrf++ or external")->required();
  score->add_option("--sources", sources, "source sentences (external)");
  score->add_option("--scorer-url", scorer_url, "external scorer URL");

  RunFlags ablate_flags;
  std::string ns_spec;
  auto* ablate = app.add_subcommand("ablate", "sweep the number of examples");
  ablate->add_option("--config", ablate_flags.config, "run config JSON")
      ->required();
  ablate->add_option("--ns", ns_spec, "comma-separated n values")->required();
  add_run_flags(ablate, ablate_flags);

  std::string hyps_a;
  std::string hyps_b;
  std::string sig_metric;
  BootstrapConfig boot;
  auto* sigtest = app.add_subcommand("sigtest", "paired bootstrap test");
  sigtest->add_option("--hyps-a", hyps_a, "system A")->required();
  sigtest->add_option("--hyps-b", hyps_b, "system B")->required();
  sigtest->add_option("--refs", refs, "references")->required();
  sigtest->add_option("--metric", sig_metric, "bleu, chrf++ or all")
      ->required();
  sigtest->add_option("--seed", boot.seed, "generator seed")->required();
  sigtest->add_option("--resamples", boot.resamples, "resample count")
      ->check(CLI::PositiveNumber);
  sigtest->add_option("--alpha", boot.alpha, "significance level");

  std::vector<std::string> inputs;
  std::string report_format;
  std::string report_out;
  auto* report = app.add_subcommand("report", "summarize run results");
  report->add_option("--in", inputs, "run_result.json files or run dirs")
      ->required();
  report->add_option("--format", report_format, "csv, markdown or jsonl")
      ->required();
  report->add_option("--out", report_out, "write report.<ext> here");

  bool check = false;
  bool bless = false;
  std::string root = ctx.default_root.string();
  int golden_concurrency = 1;
  auto* goldens = app.add_subcommand("goldens", "check or rewrite goldens");
  auto* check_flag = goldens->add_flag("--check", check, "compare");
  auto* bless_flag = goldens->add_flag("--bless", bless, "rewrite");
  check_flag->excludes(bless_flag);
  goldens->add_option("--root", root, "repository root");
  goldens->add_option("--concurrency", golden_concurrency, "run concurrency")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (goldens->parsed() && !check && !bless) {
      throw CLI::ValidationError("goldens needs --check or --bless");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      return cmd_validate(corpus, format, target, language, out, err);
    }
    if (score->parsed()) {
      return cmd_score(hyps, refs, metric, sources, scorer_url, out, err);
    }
    if (sigtest->parsed()) {
      return cmd_sigtest(hyps_a, hyps_b, refs, sig_metric, boot, out, err);
    }
    if (report->parsed()) {
      std::vector<RunResult> results;
      for (const auto& in : inputs) results.push_back(load_result(in));
      ReportFormat f = parse_report_format(report_format);
      if (report_out.empty()) {
        out << render_report(results, f);
      } else {
        err << "wrote " << emit_report(results, f, report_out).string() << '\n';
      }
      return kExitOk;
    }
    if (goldens->parsed()) {
      auto files = golden_prompt_files(root);
      auto runs = golden_run_files(root, golden_concurrency);
      files.insert(files.end(), runs.begin(), runs.end());
      if (bless) {
        bless_golden_files(root, files);
        err << "wrote " << files.size() << " golden files\n";
        return kExitOk;
      }
      auto bad = check_golden_files(root, files);
      for (const auto& p : bad) err << "golden mismatch: " << p.string() << '\n';
      out << files.size() - bad.size() << " of " << files.size()
          << " goldens match\n";
      return bad.empty() ? kExitOk : kExitFailure;
    }

    RunFlags& flags = run->parsed() ? run_flags : ablate_flags;
    RunConfig cfg;
    try {
      cfg = resolve_config(flags);
      validate_run_config(cfg);
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }

    if (run->parsed()) {
      try {
        RunResult result = run_experiment(cfg);
        write_run_outputs(result, cfg.output_dir);
        print_scores(out, result);
        err << "wrote " << cfg.output_dir.string() << '\n';
        return kExitOk;
      } catch (const RunFailed& e) {
        write_run_outputs(e.result(), cfg.output_dir);
        err << "error: run failed: " << e.what() << '\n';
        return kExitFailure;
      }
    }

    std::vector<std::size_t> ns;
    try {
      ns = parse_ns(ns_spec);
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    auto sweep = ablate_nshot(cfg, ns);
    std::vector<RunResult> results;
    for (auto& [n, result] : sweep) {
      write_run_outputs(result, cfg.output_dir / ("n" + std::to_string(n)));
      results.push_back(std::move(result));
    }
    if (!results.empty()) {
      emit_report(results, ReportFormat::kCsv, cfg.output_dir);
      emit_report(results, ReportFormat::kMarkdown, cfg.output_dir);
      out << render_report(results, ReportFormat::kMarkdown);
    }
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace glossmt::tools
