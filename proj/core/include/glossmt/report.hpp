// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/runner.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace glossmt {

enum class ReportFormat { kCsv, kMarkdown, kJsonl };

ReportFormat parse_report_format(std::string_view name);
std::string_view file_extension(ReportFormat format);

// CSV columns: language, direction, strategy, n_support, metric, score,
// sentence_count, config_digest. Markdown has one row per run, ordered by
// n_support. JSONL has one line per (run, metric).
std::string render_report(std::span<const RunResult> results,
                          ReportFormat format);

std::string render_significance(std::span<const SignificanceRow> rows);

// Writes report.<ext> into `output_dir`; throws Error if it is not writable.
std::filesystem::path emit_report(std::span<const RunResult> results,
                                  ReportFormat format,
                                  const std::filesystem::path& output_dir);

}  // namespace glossmt
