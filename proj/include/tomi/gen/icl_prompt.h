// Deterministic prompt construction for composition generation: schema
// walkthrough with node examples, the five-step ordering instruction, the
// unique-name rule, caller constraints, and the response-schema block.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomi/core/types.h"

namespace tomi {

struct SectionConstraint {
  std::string name;
  PhraseLabel label = PhraseLabel::Verse;
  int length_bars = 8;
  bool operator==(const SectionConstraint&) const = default;
};

struct GenerationContext {
  double tempo_bpm = 120.0;
  KeySignature key;
  std::optional<std::string> mood;
  std::optional<std::vector<SectionConstraint>> section_sequence;
  bool relax_sequence_limits = false;
};

/// Empty string when the context is fine; otherwise the constraint it
/// violates. Fixed sequences are expected to hold 8-10 sections of 4-16
/// bars unless relax_sequence_limits is set.
std::string contextProblem(const GenerationContext& ctx);

/// Same context in, byte-identical prompt out.
std::string buildIclPrompt(const GenerationContext& ctx);

/// The constraint-independent template part of the prompt; mirrored at
/// prompts/icl_prompt.txt.
const std::string& iclPromptTemplate();

}  // namespace tomi
