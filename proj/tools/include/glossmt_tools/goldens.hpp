// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/prompt.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace glossmt::tools {

struct GoldenFile {
  std::filesystem::path relative;  // under tests/goldens
  std::string content;
};

std::string render_golden_prompt(const PromptMessages& messages);

// One file per strategy and direction built from the mini corpus (support =
// entries 0 and 1, input = entry 2), plus the glossing request.
std::vector<GoldenFile> golden_prompt_files(const std::filesystem::path& root);

// run_result.json and report.csv for every config under data/mini/configs.
std::vector<GoldenFile> golden_run_files(const std::filesystem::path& root,
                                         int concurrency = 1);

// Relative paths whose checked-in bytes differ from `files`.
std::vector<std::filesystem::path> check_golden_files(
    const std::filesystem::path& root, const std::vector<GoldenFile>& files);

void bless_golden_files(const std::filesystem::path& root,
                        const std::vector<GoldenFile>& files);

std::filesystem::path golden_dir(const std::filesystem::path& root);

}  // namespace glossmt::tools
