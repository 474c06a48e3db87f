// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/igt.hpp"

#include "glossmt/text.hpp"

#include <algorithm>

namespace glossmt {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// [0-9]*[A-Z]+
bool matches_label_pattern(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == s.size()) return false;
  while (i < s.size()) {
    if (!is_upper(s[i])) return false;
    ++i;
  }
  return true;
}

}  // namespace

std::size_t GlossLine::morpheme_count() const {
  std::size_t n = 0;
  for (const auto& w : words) n += w.morphemes.size();
  return n;
}

const LabelLexicon& LabelLexicon::standard() {
  static const LabelLexicon kStandard{{
      // Leipzig Glossing Rules, standard abbreviations.
      "1", "2", "3", "A", "ABL", "ABS", "ACC", "ADJ", "ADV", "AGR", "ALL",
      "ANTIP", "APPL", "ART", "AUX", "BEN", "CAUS", "CLF", "COM", "COMP",
      "COMPL", "COND", "COP", "CVB", "DAT", "DECL", "DEF", "DEM", "DET",
      "DIST", "DISTR", "DU", "DUR", "ERG", "EXCL", "F", "FOC", "FUT", "GEN",
      "IMP", "INCL", "IND", "INDF", "INF", "INS", "INTR", "IPFV", "IRR", "LOC",
      "M", "N", "NEG", "NMLZ", "NOM", "OBJ", "OBL", "P", "PASS", "PFV", "PL",
      "POSS", "PRED", "PRF", "PRS", "PROG", "PROH", "PROX", "PST", "PTCP",
      "PURP", "Q", "QUOT", "RECP", "REFL", "REL", "RES", "S", "SBJ", "SBJV",
      "SG", "TOP", "TR", "VOC",
      // Lowercase conventions found in mixed-case corpora.
      "1sg", "2sg", "3sg", "1pl", "2pl", "3pl", "1du", "2du", "3du", "sg",
      "pl", "du", "abs", "erg", "dat", "gen", "acc", "nom", "abl", "ins",
      "pst", "prs", "fut", "pfv", "ipfv", "prf", "neg", "caus", "appl",
      "refl", "recp", "nmlz", "ptcp", "cvb", "sbjv", "irr", "aor", "obl",
  }};
  return kStandard;
}

MorphemeKind classify_morpheme(std::string_view surface,
                               const LabelLexicon& lexicon) {
  if (surface.empty()) return MorphemeKind::kLex;
  if (lexicon.contains(surface)) return MorphemeKind::kGram;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = surface.find('.', start);
    std::string_view part = surface.substr(
        start, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - start);
    if (!lexicon.contains(part) && !matches_label_pattern(part)) {
      return MorphemeKind::kLex;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return MorphemeKind::kGram;
}

GlossLine parse_gloss_line(std::string_view raw, const LabelLexicon& lexicon) {
  GlossLine line;
  for (const auto& token : text::split_ascii_ws(raw)) {
    GlossWord word;
    std::size_t i = 0;
    while (i < token.size()) {
      while (i < token.size() && token[i] == '-') ++i;
      std::size_t start = i;
      while (i < token.size() && token[i] != '-') ++i;
      if (i > start) {
        std::string surface = token.substr(start, i - start);
        MorphemeKind kind = classify_morpheme(surface, lexicon);
        word.morphemes.push_back({std::move(surface), kind});
      }
    }
    if (!word.morphemes.empty()) line.words.push_back(std::move(word));
  }
  return line;
}

GlossLine strip_grammatical_labels(const GlossLine& gloss) {
  GlossLine out;
  for (const auto& word : gloss.words) {
    GlossWord kept;
    for (const auto& m : word.morphemes) {
      if (!m.is_gram()) kept.morphemes.push_back(m);
    }
    if (!kept.morphemes.empty()) out.words.push_back(std::move(kept));
  }
  return out;
}

std::string render_gloss_word(const GlossWord& word) {
  std::string out;
  for (const auto& m : word.morphemes) {
    if (!out.empty()) out.push_back('-');
    out += m.surface;
  }
  return out;
}

std::string render_gloss(const GlossLine& gloss) {
  std::string out;
  for (const auto& word : gloss.words) {
    if (!out.empty()) out.push_back(' ');
    out += render_gloss_word(word);
  }
  return out;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
        return f.severity == Severity::kError;
      }));
}

std::size_t ValidationReport::warning_count() const {
  return findings.size() - error_count();
}

ValidationReport validate_entry(const IgtEntry& entry) {
  ValidationReport report;
  if (text::trim(entry.transcription).empty()) {
    report.findings.push_back(
        {Severity::kError, "empty_transcription", "transcription is empty"});
  }
  if (text::trim(entry.translation).empty()) {
    report.findings.push_back(
        {Severity::kError, "empty_translation", "translation is empty"});
  }
  if (entry.segmentation) {
    const auto seg_words = text::split_ascii_ws(*entry.segmentation);
    if (entry.gloss && entry.gloss->words.size() != seg_words.size()) {
      report.findings.push_back(
          {Severity::kWarn, "gloss_segmentation_count",
           "gloss has " + std::to_string(entry.gloss->words.size()) +
               " words but segmentation has " +
               std::to_string(seg_words.size())});
    }
    std::string joined;
    for (char c : *entry.segmentation) {
      if (c != '-' && c != '=' && c != '~') joined.push_back(c);
    }
    if (text::collapse_ws(joined) != text::collapse_ws(entry.transcription)) {
      report.findings.push_back(
          {Severity::kWarn, "segmentation_mismatch",
           "segmentation without separators does not match transcription"});
    }
  }
  return report;
}

}  // namespace glossmt
