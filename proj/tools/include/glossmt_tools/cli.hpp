// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace glossmt::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

struct CliContext {
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  // Repository root used by `goldens` when --root is not given.
  std::filesystem::path default_root;
};

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, const CliContext& ctx);

}  // namespace glossmt::tools
