// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/prompt.hpp"

#include "glossmt/error.hpp"
#include "glossmt/text.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <utility>

namespace glossmt {

namespace {

struct StrategyName {
  Strategy strategy;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<StrategyName, 13> kStrategyNames{{
    {Strategy::kZeroShot, "zero-shot", "ZeroShot"},
    {Strategy::kZeroCoT, "zero-cot", "ZeroCoT"},
    {Strategy::kFewShot, "few-shot", "FewShot"},
    {Strategy::kGlossShot, "gloss-shot", "GlossShot"},
    {Strategy::kChainGloss, "chain-gloss", "ChainGloss"},
    {Strategy::kModelGloss, "model-gloss", "ModelGloss"},
    {Strategy::kSegShot, "seg-shot", "SegShot"},
    {Strategy::kGlossWithSeg, "gloss-with-seg", "GlossWithSeg"},
    {Strategy::kChainSeg, "chain-seg", "ChainSeg"},
    {Strategy::kOracleGloss, "oracle-gloss", "OracleGloss"},
    {Strategy::kZeroGloss, "zero-gloss", "ZeroGloss"},
    {Strategy::kOracleEmpty, "oracle-empty", "OracleEmpty"},
    {Strategy::kDictBaseline, "dict-baseline", "DictBaseline"},
}};

const StrategyName& lookup(Strategy s) {
  for (const auto& n : kStrategyNames)
    if (n.strategy == s) return n;
  return kStrategyNames.front();
}

// Labels as they appear in the prompt for one direction.
struct Labels {
  std::string from;  // language of the sentence shown
  std::string to;    // language asked for
  std::string gloss;
  std::string segmentation;
};

Labels labels_for(const PromptRequest& req) {
  if (req.direction == Direction::kToEnglish) {
    return {req.source_language_name, req.target_language_name, "Gloss",
            "Segmentation"};
  }
  return {req.target_language_name, req.source_language_name,
          req.source_language_name + " Gloss",
          req.source_language_name + " Segmentation"};
}

std::string gloss_for_prompt(const IgtEntry& entry, const GlossLine& gloss,
                             bool raw, bool stripped) {
  if (stripped) return render_gloss(strip_grammatical_labels(gloss));
  if (raw && entry.gloss_raw) return *entry.gloss_raw;
  return render_gloss(gloss);
}

// Sentence shown to the model and the translation it should produce.
std::pair<const std::string&, const std::string&> sides(const IgtEntry& e,
                                                        Direction d) {
  if (d == Direction::kToEnglish) return {e.transcription, e.translation};
  return {e.translation, e.transcription};
}

std::string suffix(const Labels& l) {
  return "A translation for this " + l.from + " sentence in " + l.to + " is:";
}

std::string dictionary_line(const std::vector<DictionaryEntry>& dict) {
  std::string out;
  for (const auto& entry : dict) {
    if (entry.translations.empty()) continue;
    if (!out.empty()) out += "; ";
    out += "the word " + entry.word + " means ";
    for (std::size_t i = 0; i < entry.translations.size(); ++i) {
      if (i > 0) out += ",";
      out += entry.translations[i];
    }
  }
  return out;
}

std::optional<std::string_view> label_value(std::string_view line,
                                            std::string_view label) {
  std::string_view t = text::trim(line);
  std::size_t colon = t.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view head = text::trim(t.substr(0, colon));
  // "Gloss:" or "<Language> Gloss:"
  bool match = false;
  if (head.size() == label.size()) {
    match = text::starts_with_icase(head, label);
  } else if (head.size() > label.size() + 1) {
    std::string_view tail = head.substr(head.size() - label.size());
    std::string_view rest = head.substr(0, head.size() - label.size());
    match = text::starts_with_icase(tail, label) && rest.back() == ' ' &&
            text::trim(rest).find(' ') == std::string_view::npos;
  }
  if (!match) return std::nullopt;
  return text::trim(t.substr(colon + 1));
}

}  // namespace

std::string_view to_string(Strategy strategy) { return lookup(strategy).id; }

std::string_view display_name(Strategy strategy) {
  return lookup(strategy).display;
}

Strategy parse_strategy(std::string_view name) {
  for (const auto& n : kStrategyNames) {
    if (n.id == name || n.display == name) return n.strategy;
  }
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

bool is_zero_support(Strategy s) {
  return s == Strategy::kZeroShot || s == Strategy::kZeroCoT ||
         s == Strategy::kZeroGloss;
}

bool needs_input_gloss(Strategy s) {
  return s == Strategy::kModelGloss || s == Strategy::kOracleGloss ||
         s == Strategy::kZeroGloss || s == Strategy::kOracleEmpty;
}

bool support_has_gloss(Strategy s) {
  return s == Strategy::kGlossShot || s == Strategy::kChainGloss ||
         s == Strategy::kModelGloss || s == Strategy::kGlossWithSeg ||
         s == Strategy::kOracleGloss || s == Strategy::kOracleEmpty;
}

bool support_has_segmentation(Strategy s) {
  return s == Strategy::kSegShot || s == Strategy::kGlossWithSeg ||
         s == Strategy::kChainSeg;
}

bool is_chain(Strategy s) {
  return s == Strategy::kChainGloss || s == Strategy::kChainSeg;
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kToEnglish ? "to-english" : "from-english";
}

Direction parse_direction(std::string_view name) {
  if (name == "to-english") return Direction::kToEnglish;
  if (name == "from-english") return Direction::kFromEnglish;
  throw InvalidArgument("unknown direction '" + std::string(name) +
                        "' (expected to-english or from-english)");
}

std::string PromptMessages::digest() const {
  nlohmann::json j = {{"system", system}, {"user", user}};
  return text::sha256_hex(j.dump());
}

void check_request(const PromptRequest& req) {
  const auto name = std::string(display_name(req.strategy));
  if (req.source_language_name.empty()) {
    throw InvalidArgument(name + " requires source_language_name");
  }
  if (req.target_language_name.empty()) {
    throw InvalidArgument(name + " requires target_language_name");
  }
  if (is_zero_support(req.strategy) && !req.support.empty()) {
    throw InvalidArgument(name + " takes no support examples");
  }
  if (!is_zero_support(req.strategy) && req.support.empty()) {
    throw InvalidArgument(name + " requires support examples");
  }
  if (needs_input_gloss(req.strategy) && !req.input_gloss_override) {
    throw InvalidArgument(name + " requires input_gloss_override");
  }
  if (!needs_input_gloss(req.strategy) && req.input_gloss_override) {
    throw InvalidArgument(name + " does not accept input_gloss_override");
  }
  if (req.strategy == Strategy::kDictBaseline && !req.dictionary) {
    throw InvalidArgument(name + " requires a dictionary");
  }
  if (req.strategy != Strategy::kDictBaseline && req.dictionary) {
    throw InvalidArgument(name + " does not accept a dictionary");
  }
  for (std::size_t i = 0; i < req.support.size(); ++i) {
    const auto& e = req.support[i];
    const auto where = "support[" + std::to_string(i) + "]";
    if (support_has_gloss(req.strategy) && !e.gloss) {
      throw InvalidArgument(name + " requires " + where + ".gloss");
    }
    if (support_has_segmentation(req.strategy) && !e.segmentation) {
      throw InvalidArgument(name + " requires " + where + ".segmentation");
    }
  }
  const auto& shown = sides(req.input, req.direction).first;
  if (text::trim(shown).empty()) {
    throw InvalidArgument(name + " requires a non-empty input sentence");
  }
}

PromptMessages build_prompt(const PromptRequest& req) {
  check_request(req);
  const Labels l = labels_for(req);
  const bool stripped = req.strategy == Strategy::kOracleEmpty;

  std::string user;
  if (!req.support.empty()) {
    user += "Here are some examples of " + l.from +
            " sentences and their corresponding " + l.to + " translations:\n";
    for (const auto& e : req.support) {
      const auto [shown, expected] = sides(e, req.direction);
      user += "\n" + l.from + " Sentence: " + shown + "\n";
      if (support_has_segmentation(req.strategy)) {
        user += l.segmentation + ": " + *e.segmentation + "\n";
      }
      if (support_has_gloss(req.strategy)) {
        user += l.gloss + ": " +
                gloss_for_prompt(e, *e.gloss, req.raw_gloss, stripped) + "\n";
      }
      user += suffix(l) + " " + expected + "\n";
    }
    user += "\n";
  }

  user += l.from + " Sentence: " + sides(req.input, req.direction).first + "\n";
  if (req.input_gloss_override) {
    user += l.gloss + ": " +
            (stripped ? render_gloss(
                            strip_grammatical_labels(*req.input_gloss_override))
                      : render_gloss(*req.input_gloss_override)) +
            "\n";
  }
  if (req.strategy == Strategy::kDictBaseline) {
    std::string hints = dictionary_line(*req.dictionary);
    if (!hints.empty()) user += "In this context, " + hints + ".\n";
  }
  if (req.strategy == Strategy::kZeroCoT) {
    user += std::string(kZeroCoTInstruction) + "\n";
  }
  if (req.strategy == Strategy::kChainGloss) {
    user += "First write the gloss of this sentence on a line starting with \"" +
            l.gloss + ":\", then write the translation.\n";
  } else if (req.strategy == Strategy::kChainSeg) {
    user += "First write the morphological segmentation of this sentence on a "
            "line starting with \"" +
            l.segmentation + ":\", then write the translation.\n";
  }
  user += "Enclose your translation in " + req.enclosure.open + " and " +
          req.enclosure.close + ".\n";
  user += suffix(l);

  return {std::string(kExpertSystemPrompt), std::move(user)};
}

std::string_view to_string(Segmented segmented) {
  switch (segmented) {
    case Segmented::kYes: return "yes";
    case Segmented::kNo: return "no";
    case Segmented::kUnknown: return "unknown";
  }
  return "unknown";
}

PromptMessages build_glossing_prompt(std::string_view transcription,
                                     std::string_view language_name,
                                     Segmented segmented) {
  if (text::trim(transcription).empty()) {
    throw InvalidArgument("glossing prompt requires a non-empty transcription");
  }
  const std::string lang(language_name);
  std::string user = "Provide the glosses for the transcription in " + lang +
                     ".\n\nTranscription in " + lang + ": " +
                     std::string(transcription) +
                     "\nTranscription segmented: " +
                     std::string(to_string(segmented)) + "\n\nGlosses:";
  return {"", std::move(user)};
}

std::string_view to_string(ExtractionMethod method) {
  switch (method) {
    case ExtractionMethod::kEnclosure: return "enclosure";
    case ExtractionMethod::kLabelLine: return "label-line";
    case ExtractionMethod::kWholeText: return "whole-text";
  }
  return "whole-text";
}

Extraction extract_translation(std::string_view raw, Strategy strategy,
                               const Enclosure& enclosure) {
  if (text::trim(raw).empty()) throw InvalidArgument("empty completion");

  Extraction out;
  out.raw = std::string(raw);
  // Offset in `raw` where the translation starts; chain lines are searched
  // before it.
  std::size_t translation_at = raw.size();
  bool found = false;

  if (!enclosure.open.empty() && !enclosure.close.empty()) {
    std::size_t close = raw.rfind(enclosure.close);
    if (close != std::string_view::npos && close >= enclosure.open.size()) {
      std::size_t open = raw.rfind(enclosure.open, close - enclosure.open.size());
      if (open != std::string_view::npos) {
        std::string_view inner = text::trim(raw.substr(
            open + enclosure.open.size(), close - open - enclosure.open.size()));
        if (!inner.empty()) {
          out.translation = std::string(inner);
          out.method = ExtractionMethod::kEnclosure;
          translation_at = open;
          found = true;
        }
      }
    }
  }

  if (!found) {
    std::size_t offset = 0;
    std::size_t best_at = std::string_view::npos;
    std::string_view best;
    while (offset < raw.size()) {
      std::size_t end = raw.find('\n', offset);
      if (end == std::string_view::npos) end = raw.size();
      std::string_view line = text::trim(raw.substr(offset, end - offset));
      if (text::starts_with_icase(line, "translation:")) {
        std::string_view value = text::trim(line.substr(12));
        if (!value.empty()) {
          best = value;
          best_at = offset;
        }
      }
      offset = end + 1;
    }
    if (best_at != std::string_view::npos) {
      out.translation = std::string(best);
      out.method = ExtractionMethod::kLabelLine;
      translation_at = best_at;
      found = true;
    }
  }

  std::string_view chain_label;
  if (strategy == Strategy::kChainGloss) chain_label = "gloss";
  if (strategy == Strategy::kChainSeg) chain_label = "segmentation";

  std::size_t chain_line_end = std::string_view::npos;
  if (!chain_label.empty()) {
    std::string_view head = raw.substr(0, translation_at);
    std::size_t offset = 0;
    std::optional<std::string> value;
    while (offset < head.size()) {
      std::size_t end = head.find('\n', offset);
      if (end == std::string_view::npos) end = head.size();
      auto v = label_value(head.substr(offset, end - offset), chain_label);
      if (v) {
        value = std::string(*v);
        chain_line_end = end;
      }
      offset = end + 1;
    }
    if (value) {
      if (strategy == Strategy::kChainGloss) {
        out.gloss = parse_gloss_line(*value);
      } else {
        out.segmentation = *value;
      }
    }
  }

  if (!found) {
    std::string_view whole = text::trim(raw);
    if (chain_line_end != std::string_view::npos) {
      std::string_view after = text::trim(raw.substr(
          std::min(chain_line_end + 1, raw.size())));
      if (!after.empty()) whole = after;
    }
    out.translation = std::string(whole);
    out.method = ExtractionMethod::kWholeText;
  }
  return out;
}

}  // namespace glossmt
