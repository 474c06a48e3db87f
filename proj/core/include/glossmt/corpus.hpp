// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/igt.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace glossmt {

struct Corpus {
  std::vector<IgtEntry> entries;  // file order
  std::string language;
  std::string metalanguage = "en";
  std::string name;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Metadata the file itself may not carry.
struct CorpusInfo {
  std::string language;
  std::string metalanguage = "en";
  std::string name;
};

struct LoadResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

enum class CorpusFormat { kSigmorphon, kJsonl, kParallel };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

// Blocks of "\t", "\m", "\g", "\l" lines separated by blank lines. Unknown
// markers are skipped with a warning. Throws ParseError.
LoadResult load_sigmorphon(std::string_view content, const CorpusInfo& info,
                           const LabelLexicon& lexicon =
                               LabelLexicon::standard());

// One JSON object per line; see README for the schema. Throws ParseError.
// If `info.language` is empty the first record decides the corpus language.
LoadResult load_jsonl(std::string_view content, const CorpusInfo& info = {},
                      const LabelLexicon& lexicon = LabelLexicon::standard());

// Line-aligned source/target files; no glosses. Throws InvalidArgument on a
// line count mismatch.
Corpus load_parallel(std::string_view source_content,
                     std::string_view target_content, const CorpusInfo& info);

std::string write_sigmorphon(const Corpus& corpus);
std::string write_jsonl(const Corpus& corpus);

struct SplitSpec {
  std::size_t n_support = 21;
};

struct CorpusSplit {
  Corpus support;
  Corpus eval;
};

// support = first n entries, eval = the rest, both in file order.
CorpusSplit split_support(const Corpus& corpus, SplitSpec spec);

std::string read_file(const std::filesystem::path& path);

// Dispatches on `format`; `target_path` is only read for kParallel.
LoadResult load_corpus_file(const std::filesystem::path& path,
                            CorpusFormat format, const CorpusInfo& info,
                            const std::filesystem::path& target_path = {});

// ISO 639 code to English display name ("swa" -> "Swahili"). Unknown codes
// are returned unchanged.
std::string language_display_name(std::string_view code);

}  // namespace glossmt
