// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/report.hpp"

#include "glossmt/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace glossmt {

namespace fs = std::filesystem;

namespace {

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(v);
  }
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string md_cell(std::string_view v) {
  std::string out;
  for (char ch : v) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

std::string render_csv(std::span<const RunResult> results) {
  std::string out =
      "language,direction,strategy,n_support,metric,score,sentence_count,"
      "config_digest\n";
  for (const auto& r : results) {
    for (const auto& s : r.scores) {
      out += csv_field(r.language) + ',' +
             std::string(to_string(r.direction)) + ',' +
             std::string(to_string(r.strategy)) + ',' +
             std::to_string(r.n_support) + ',' + csv_field(s.metric_name) +
             ',' + text::format_score(s.corpus_score) + ',' +
             std::to_string(s.sentence_count) + ',' +
             csv_field(r.config_digest) + '\n';
    }
  }
  return out;
}

std::string render_markdown(std::span<const RunResult> results) {
  std::vector<std::string> metrics;
  for (const auto& r : results) {
    for (const auto& s : r.scores) {
      if (std::find(metrics.begin(), metrics.end(), s.metric_name) ==
          metrics.end()) {
        metrics.push_back(s.metric_name);
      }
    }
  }
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return results[a].n_support < results[b].n_support;
                   });

  std::string out = "| language | direction | strategy | n_support |";
  std::string rule = "|---|---|---|---:|";
  for (const auto& m : metrics) {
    out += ' ' + md_cell(m) + " |";
    rule += "---:|";
  }
  out += '\n' + rule + '\n';
  for (std::size_t i : order) {
    const auto& r = results[i];
    out += "| " + md_cell(r.language) + " | " +
           std::string(to_string(r.direction)) + " | " +
           std::string(to_string(r.strategy)) + " | " +
           std::to_string(r.n_support) + " |";
    for (const auto& m : metrics) {
      auto it = std::find_if(r.scores.begin(), r.scores.end(),
                             [&](const ScoreReport& s) {
                               return s.metric_name == m;
                             });
      out += ' ';
      out += it == r.scores.end() ? "-" : text::format_score(it->corpus_score);
      out += " |";
    }
    out += '\n';
  }
  return out;
}

std::string render_jsonl(std::span<const RunResult> results) {
  std::string out;
  for (const auto& r : results) {
    for (const auto& s : r.scores) {
      nlohmann::ordered_json j;
      j["language"] = r.language;
      j["direction"] = to_string(r.direction);
      j["strategy"] = to_string(r.strategy);
      j["n_support"] = r.n_support;
      j["metric"] = s.metric_name;
      j["score"] = s.corpus_score;
      j["sentence_count"] = s.sentence_count;
      j["config_digest"] = r.config_digest;
      out += j.dump() + '\n';
    }
  }
  return out;
}

void write_text(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory " + dir.string());
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "jsonl") return ReportFormat::kJsonl;
  throw InvalidArgument("unknown report format '" + std::string(name) + "'");
}

std::string_view file_extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kMarkdown:
      return "md";
    case ReportFormat::kJsonl:
      return "jsonl";
  }
  return "txt";
}

std::string render_report(std::span<const RunResult> results,
                          ReportFormat format) {
  if (results.empty()) throw InvalidArgument("no results to report");
  switch (format) {
    case ReportFormat::kCsv:
      return render_csv(results);
    case ReportFormat::kMarkdown:
      return render_markdown(results);
    case ReportFormat::kJsonl:
      return render_jsonl(results);
  }
  return {};
}

std::string render_significance(std::span<const SignificanceRow> rows) {
  std::string out = "metric,score_a,score_b,mean_delta,p_value,significant\n";
  for (const auto& r : rows) {
    out += csv_field(r.metric) + ',' + text::format_score(r.score_a) + ',' +
           text::format_score(r.score_b) + ',' +
           text::format_score(r.mean_delta) + ',' +
           text::format_score(r.p_value) + ',' +
           (r.significant ? "true" : "false") + '\n';
  }
  return out;
}

fs::path emit_report(std::span<const RunResult> results, ReportFormat format,
                     const fs::path& output_dir) {
  std::string body = render_report(results, format);
  ensure_dir(output_dir);
  fs::path path =
      output_dir / ("report." + std::string(file_extension(format)));
  write_text(path, body);
  return path;
}

void write_run_outputs(const RunResult& result, const fs::path& dir) {
  ensure_dir(dir);
  write_text(dir / "run_result.json", to_json(result).dump(2) + '\n');
  write_text(dir / "timing.json", to_json(result.timing).dump(2) + '\n');
  emit_report(std::span<const RunResult>(&result, 1), ReportFormat::kCsv, dir);
}

}  // namespace glossmt
