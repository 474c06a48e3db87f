// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/corpus.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace glossmt {

namespace {

using nlohmann::json;

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string normalized(std::string_view s) {
  return text::nfc(text::trim(s));
}

struct PendingBlock {
  std::size_t first_line = 0;
  std::optional<std::string> transcription;
  std::optional<std::string> segmentation;
  std::optional<std::string> gloss;
  std::optional<std::string> translation;
};

// The raw bytes when they still describe `gloss`, else the normal form.
std::string gloss_text(const IgtEntry& e) {
  if (e.gloss_raw &&
      render_gloss(parse_gloss_line(*e.gloss_raw)) == render_gloss(*e.gloss)) {
    return *e.gloss_raw;
  }
  return render_gloss(*e.gloss);
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "sigmorphon") return CorpusFormat::kSigmorphon;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "parallel") return CorpusFormat::kParallel;
  throw InvalidArgument("unknown corpus format '" + std::string(name) +
                        "' (expected sigmorphon, jsonl or parallel)");
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kSigmorphon: return "sigmorphon";
    case CorpusFormat::kJsonl: return "jsonl";
    case CorpusFormat::kParallel: return "parallel";
  }
  return "unknown";
}

LoadResult load_sigmorphon(std::string_view content, const CorpusInfo& info,
                           const LabelLexicon& lexicon) {
  LoadResult result;
  result.corpus.language = info.language;
  result.corpus.metalanguage = info.metalanguage;
  result.corpus.name = info.name;

  PendingBlock block;
  bool in_block = false;

  const auto flush = [&]() {
    if (!in_block) return;
    if (!block.transcription) {
      throw ParseError("block is missing its \\t transcription line",
                       block.first_line);
    }
    if (!block.translation) {
      throw ParseError("block is missing its \\l translation line",
                       block.first_line);
    }
    IgtEntry entry;
    entry.transcription = std::move(*block.transcription);
    entry.segmentation = std::move(block.segmentation);
    if (block.gloss) {
      entry.gloss = parse_gloss_line(*block.gloss, lexicon);
      entry.gloss_raw = std::move(block.gloss);
    }
    entry.translation = std::move(*block.translation);
    entry.language = info.language;
    entry.metalanguage = info.metalanguage;
    result.corpus.entries.push_back(std::move(entry));
    block = PendingBlock{};
    in_block = false;
  };

  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() != '\\' || line.size() < 2 || !is_letter(line[1])) {
      throw ParseError("expected a tier marker such as \\t, \\m, \\g or \\l",
                       line_no);
    }
    std::size_t end = 1;
    while (end < line.size() && is_letter(line[end])) ++end;
    if (end < line.size() && line[end] != ' ' && line[end] != '\t') {
      throw ParseError("tier marker must be followed by a space", line_no);
    }
    std::string marker(line.substr(1, end - 1));
    std::string value = normalized(line.substr(end));

    if (!in_block) {
      in_block = true;
      block.first_line = line_no;
    }
    std::optional<std::string>* slot = nullptr;
    if (marker == "t") slot = &block.transcription;
    else if (marker == "m") slot = &block.segmentation;
    else if (marker == "g") slot = &block.gloss;
    else if (marker == "l") slot = &block.translation;

    if (slot == nullptr) {
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": ignoring unknown tier \\" + marker);
      continue;
    }
    if (slot->has_value()) {
      throw ParseError("duplicate \\" + marker + " line in block", line_no);
    }
    *slot = std::move(value);
  }
  flush();
  return result;
}

LoadResult load_jsonl(std::string_view content, const CorpusInfo& info,
                      const LabelLexicon& lexicon) {
  LoadResult result;
  result.corpus.language = info.language;
  result.corpus.metalanguage = info.metalanguage;
  result.corpus.name = info.name;
  bool language_fixed = !info.language.empty();

  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(lines[i]).empty()) continue;

    json record;
    try {
      record = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!record.is_object()) {
      throw ParseError("record is not a JSON object", line_no);
    }

    const auto required = [&](const char* key) -> std::string {
      auto it = record.find(key);
      if (it == record.end() || it->is_null()) {
        throw ParseError(std::string("missing required field '") + key + "'",
                         line_no);
      }
      if (!it->is_string()) {
        throw ParseError(std::string("field '") + key + "' must be a string",
                         line_no);
      }
      return it->get<std::string>();
    };
    const auto optional = [&](const char* key) -> std::optional<std::string> {
      auto it = record.find(key);
      if (it == record.end() || it->is_null()) return std::nullopt;
      if (!it->is_string()) {
        throw ParseError(std::string("field '") + key +
                             "' must be a string or null",
                         line_no);
      }
      return it->get<std::string>();
    };

    IgtEntry entry;
    entry.transcription = normalized(required("transcription"));
    entry.translation = normalized(required("translation"));
    entry.language = required("language");
    if (auto seg = optional("segmentation")) {
      entry.segmentation = normalized(*seg);
    }
    if (auto gloss = optional("glosses")) {
      entry.gloss_raw = normalized(*gloss);
      entry.gloss = parse_gloss_line(*entry.gloss_raw, lexicon);
    }
    entry.metalanguage = optional("metalang").value_or("en");

    if (!language_fixed) {
      result.corpus.language = entry.language;
      result.corpus.metalanguage = entry.metalanguage;
      language_fixed = true;
    } else if (entry.language != result.corpus.language) {
      throw ParseError("record language '" + entry.language +
                           "' differs from corpus language '" +
                           result.corpus.language + "'",
                       line_no);
    }
    result.corpus.entries.push_back(std::move(entry));
  }
  return result;
}

Corpus load_parallel(std::string_view source_content,
                     std::string_view target_content, const CorpusInfo& info) {
  const auto sources = text::split_lines(source_content);
  const auto targets = text::split_lines(target_content);
  if (sources.size() != targets.size()) {
    throw InvalidArgument("line count mismatch " +
                          std::to_string(sources.size()) + " vs " +
                          std::to_string(targets.size()));
  }
  Corpus corpus;
  corpus.language = info.language;
  corpus.metalanguage = info.metalanguage;
  corpus.name = info.name;
  corpus.entries.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    IgtEntry entry;
    entry.transcription = normalized(sources[i]);
    entry.translation = normalized(targets[i]);
    entry.language = info.language;
    entry.metalanguage = info.metalanguage;
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

std::string write_sigmorphon(const Corpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    const auto& e = corpus.entries[i];
    if (i > 0) out += "\n";
    out += "\\t " + e.transcription + "\n";
    if (e.segmentation) out += "\\m " + *e.segmentation + "\n";
    if (e.gloss) out += "\\g " + gloss_text(e) + "\n";
    out += "\\l " + e.translation + "\n";
  }
  return out;
}

std::string write_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& e : corpus.entries) {
    nlohmann::ordered_json record;
    record["transcription"] = e.transcription;
    using nlohmann::ordered_json;
    record["segmentation"] = e.segmentation ? ordered_json(*e.segmentation)
                                            : ordered_json(nullptr);
    record["glosses"] =
        e.gloss ? ordered_json(gloss_text(e)) : ordered_json(nullptr);
    record["translation"] = e.translation;
    record["language"] = e.language;
    record["metalang"] = e.metalanguage;
    out += record.dump() + "\n";
  }
  return out;
}

CorpusSplit split_support(const Corpus& corpus, SplitSpec spec) {
  if (spec.n_support > corpus.size()) {
    throw InvalidArgument("n_support " + std::to_string(spec.n_support) +
                          " exceeds corpus size " +
                          std::to_string(corpus.size()));
  }
  CorpusSplit split;
  split.support = Corpus{{}, corpus.language, corpus.metalanguage, corpus.name};
  split.eval = split.support;
  const auto cut = corpus.entries.begin() +
                   static_cast<std::ptrdiff_t>(spec.n_support);
  split.support.entries.assign(corpus.entries.begin(), cut);
  split.eval.entries.assign(cut, corpus.entries.end());
  return split;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadResult load_corpus_file(const std::filesystem::path& path,
                            CorpusFormat format, const CorpusInfo& info,
                            const std::filesystem::path& target_path) {
  switch (format) {
    case CorpusFormat::kSigmorphon:
      return load_sigmorphon(read_file(path), info);
    case CorpusFormat::kJsonl:
      return load_jsonl(read_file(path), info);
    case CorpusFormat::kParallel:
      if (target_path.empty()) {
        throw InvalidArgument("parallel corpus needs a target file");
      }
      return {load_parallel(read_file(path), read_file(target_path), info), {}};
  }
  throw InvalidArgument("unknown corpus format");
}

std::string language_display_name(std::string_view code) {
  static const std::map<std::string, std::string, std::less<>> kNames = {
      {"ara", "Arabic"},     {"arb", "Arabic"},     {"ddo", "Tsez"},
      {"en", "English"},     {"eng", "English"},    {"ell", "Greek"},
      {"git", "Gitksan"},    {"gre", "Greek"},      {"isl", "Icelandic"},
      {"jpn", "Japanese"},   {"kan", "Kannada"},    {"lez", "Lezgi"},
      {"mar", "Marathi"},    {"ntu", "Natugu"},     {"por", "Portuguese"},
      {"rus", "Russian"},    {"swa", "Swahili"},    {"swh", "Swahili"},
      {"tha", "Thai"},       {"urd", "Urdu"},       {"yor", "Yoruba"},
  };
  auto it = kNames.find(code);
  return it == kNames.end() ? std::string(code) : it->second;
}

}  // namespace glossmt
