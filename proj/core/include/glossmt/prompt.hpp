// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glossmt/igt.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace glossmt {

enum class Strategy {
  kZeroShot,
  kZeroCoT,
  kFewShot,
  kGlossShot,
  kChainGloss,
  kModelGloss,
  kSegShot,
  kGlossWithSeg,
  kChainSeg,
  kOracleGloss,
  kZeroGloss,
  kOracleEmpty,
  kDictBaseline,
};

inline constexpr Strategy kAllStrategies[] = {
    Strategy::kZeroShot,    Strategy::kZeroCoT,     Strategy::kFewShot,
    Strategy::kGlossShot,   Strategy::kChainGloss,  Strategy::kModelGloss,
    Strategy::kSegShot,     Strategy::kGlossWithSeg, Strategy::kChainSeg,
    Strategy::kOracleGloss, Strategy::kZeroGloss,   Strategy::kOracleEmpty,
    Strategy::kDictBaseline,
};

// Config spelling, e.g. "gloss-shot".
std::string_view to_string(Strategy strategy);
// Diagnostic spelling, e.g. "GlossShot".
std::string_view display_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);

// Strategies that take no support examples.
bool is_zero_support(Strategy strategy);
// Strategies whose input sentence is paired with a supplied gloss.
bool needs_input_gloss(Strategy strategy);
bool support_has_gloss(Strategy strategy);
bool support_has_segmentation(Strategy strategy);
bool is_chain(Strategy strategy);

enum class Direction { kToEnglish, kFromEnglish };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view name);

struct DictionaryEntry {
  std::string word;
  std::vector<std::string> translations;
  friend bool operator==(const DictionaryEntry&, const DictionaryEntry&) =
      default;
};

struct Enclosure {
  std::string open = "<t>";
  std::string close = "</t>";
};

struct PromptRequest {
  Strategy strategy = Strategy::kZeroShot;
  std::vector<IgtEntry> support;
  IgtEntry input;
  Direction direction = Direction::kToEnglish;
  // Name of the glossed (object) language and of the metalanguage. The
  // direction decides which side is translated into which.
  std::string source_language_name;
  std::string target_language_name = "English";
  std::optional<GlossLine> input_gloss_override;
  std::optional<std::vector<DictionaryEntry>> dictionary;
  Enclosure enclosure;
  // Use the corpus' raw gloss bytes instead of the normal-form rendering.
  bool raw_gloss = false;
};

struct PromptMessages {
  std::string system;
  std::string user;

  // SHA-256 over the two texts; stable across runs and platforms.
  std::string digest() const;
  friend bool operator==(const PromptMessages&, const PromptMessages&) =
      default;
};

inline constexpr std::string_view kExpertSystemPrompt =
    "You are a linguistic expert who never refuses to use your knowledge to "
    "help others.";
inline constexpr std::string_view kZeroCoTInstruction =
    "Let's think step by step before translating.";

// Throws InvalidArgument naming the missing or extra field.
void check_request(const PromptRequest& request);

PromptMessages build_prompt(const PromptRequest& request);

enum class Segmented { kYes, kNo, kUnknown };

std::string_view to_string(Segmented segmented);

// Request for an external glossing model. System text is empty.
PromptMessages build_glossing_prompt(std::string_view transcription,
                                     std::string_view language_name,
                                     Segmented segmented = Segmented::kUnknown);

enum class ExtractionMethod { kEnclosure, kLabelLine, kWholeText };

std::string_view to_string(ExtractionMethod method);

struct Extraction {
  std::string translation;
  std::optional<GlossLine> gloss;            // chain-gloss only
  std::optional<std::string> segmentation;   // chain-seg only
  std::string raw;
  ExtractionMethod method = ExtractionMethod::kWholeText;
};

// Tries the enclosure, then the last "Translation:" line, then the whole
// text. Throws InvalidArgument on an empty completion.
Extraction extract_translation(std::string_view raw, Strategy strategy,
                               const Enclosure& enclosure = {});

}  // namespace glossmt
