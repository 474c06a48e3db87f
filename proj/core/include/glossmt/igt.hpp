// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace glossmt {

enum class MorphemeKind { kGram, kLex };

// One hyphen-delimited piece of a gloss word. `surface` never contains
// whitespace or '-'.
struct Morpheme {
  std::string surface;
  MorphemeKind kind = MorphemeKind::kLex;

  bool is_gram() const { return kind == MorphemeKind::kGram; }
  friend bool operator==(const Morpheme&, const Morpheme&) = default;
};

struct GlossWord {
  std::vector<Morpheme> morphemes;  // never empty for parser output
  friend bool operator==(const GlossWord&, const GlossWord&) = default;
};

struct GlossLine {
  std::vector<GlossWord> words;

  bool empty() const { return words.empty(); }
  std::size_t morpheme_count() const;
  friend bool operator==(const GlossLine&, const GlossLine&) = default;
};

// Set of surfaces always classified as grammatical labels, in addition to
// the built-in uppercase pattern (optional digits + uppercase letters,
// dot-joined repeats allowed).
class LabelLexicon {
 public:
  LabelLexicon() = default;
  explicit LabelLexicon(std::set<std::string, std::less<>> labels)
      : labels_(std::move(labels)) {}

  // Leipzig standard abbreviations plus common lowercase person/number and
  // case labels.
  static const LabelLexicon& standard();

  bool contains(std::string_view label) const {
    return labels_.find(label) != labels_.end();
  }
  void add(std::string label) { labels_.insert(std::move(label)); }
  std::size_t size() const { return labels_.size(); }

 private:
  std::set<std::string, std::less<>> labels_;
};

// Dot-joined composites are GRAM only if every component is.
MorphemeKind classify_morpheme(std::string_view surface,
                               const LabelLexicon& lexicon =
                                   LabelLexicon::standard());

// Total: whitespace splits words, hyphen runs split morphemes, empty
// pieces are discarded, and words left without morphemes are dropped.
GlossLine parse_gloss_line(std::string_view raw,
                           const LabelLexicon& lexicon =
                               LabelLexicon::standard());

// Drops GRAM morphemes and any word left empty.
GlossLine strip_grammatical_labels(const GlossLine& gloss);

std::string render_gloss_word(const GlossWord& word);

// Normal form: '-' within words, ' ' between words.
std::string render_gloss(const GlossLine& gloss);

struct IgtEntry {
  std::string transcription;
  std::optional<std::string> segmentation;
  std::optional<GlossLine> gloss;
  // Gloss bytes as loaded (NFC, trimmed); kept for raw prompt passthrough.
  std::optional<std::string> gloss_raw;
  std::string translation;
  std::string language;
  std::string metalanguage = "en";

  friend bool operator==(const IgtEntry&, const IgtEntry&) = default;
};

enum class Severity { kWarn, kError };

struct Finding {
  Severity severity;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool ok() const { return error_count() == 0; }
};

ValidationReport validate_entry(const IgtEntry& entry);

}  // namespace glossmt
