// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/report.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace glossmt {
namespace {

RunResult fake_run(std::size_t n, double bleu, double chrf) {
  RunResult r;
  r.language = "swa";
  r.corpus_name = "mini";
  r.strategy = Strategy::kFewShot;
  r.n_support = n;
  r.config_digest = "0123456789abcdef";
  r.scores = {{"BLEU", bleu, 3, "bleu|13a"}, {"chrF++", chrf, 3, "chrf"}};
  return r;
}

TEST(Report, CsvHasHeaderAndOneRowPerMetric) {
  std::vector<RunResult> runs{fake_run(21, 12.5, 40.25)};
  auto lines = text::split_lines(render_report(runs, ReportFormat::kCsv));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "language,direction,strategy,n_support,metric,score,"
            "sentence_count,config_digest");
  EXPECT_NE(lines[1].find("swa,to-english,"), std::string::npos);
  EXPECT_NE(lines[1].find(",21,BLEU,"), std::string::npos);
}

TEST(Report, MarkdownRowsAscendByN) {
  std::vector<RunResult> runs{fake_run(45, 3, 4), fake_run(3, 1, 2),
                              fake_run(21, 2, 3)};
  auto md = render_report(runs, ReportFormat::kMarkdown);
  auto p3 = md.find("| 3 |");
  auto p21 = md.find("| 21 |");
  auto p45 = md.find("| 45 |");
  ASSERT_NE(p3, std::string::npos);
  EXPECT_LT(p3, p21);
  EXPECT_LT(p21, p45);
  EXPECT_NE(md.find("| BLEU | chrF++ |"), std::string::npos);
}

TEST(Report, JsonlOneLinePerRunAndMetric) {
  std::vector<RunResult> runs{fake_run(3, 1, 2), fake_run(9, 3, 4)};
  auto lines = text::split_lines(render_report(runs, ReportFormat::kJsonl));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  ASSERT_EQ(lines.size(), 4u);
  for (const auto& l : lines) {
    auto j = nlohmann::json::parse(l);
    EXPECT_TRUE(j.contains("metric"));
    EXPECT_TRUE(j.contains("score"));
  }
}

TEST(Report, EmptyInputAndFormats) {
  EXPECT_THROW(render_report({}, ReportFormat::kCsv), InvalidArgument);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::kMarkdown);
  EXPECT_EQ(file_extension(ReportFormat::kJsonl), "jsonl");
  EXPECT_THROW(parse_report_format("xlsx"), InvalidArgument);
}

TEST(Report, EmitWritesFileAndFailsOnUnwritableDir) {
  testing::TempDir dir;
  std::vector<RunResult> runs{fake_run(3, 1, 2)};
  auto path = emit_report(runs, ReportFormat::kCsv, dir.path() / "r");
  EXPECT_EQ(path.filename(), "report.csv");
  EXPECT_EQ(testing::slurp(path), render_report(runs, ReportFormat::kCsv));
  // A regular file where the directory should be.
  EXPECT_THROW(emit_report(runs, ReportFormat::kCsv, path / "sub"), Error);
}

TEST(Report, SignificanceCsv) {
  std::vector<SignificanceRow> rows{{"BLEU", 7.5, 14.2, 6.9, 0.076, false}};
  auto s = render_significance(rows);
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "metric,score_a,score_b,mean_delta,p_value,significant");
  EXPECT_NE(s.find("BLEU,"), std::string::npos);
  EXPECT_NE(s.find("0.076"), std::string::npos);
}

}  // namespace
}  // namespace glossmt
