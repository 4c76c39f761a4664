#include "tomi/gen/icl_prompt.h"

#include <sstream>

namespace tomi {

namespace {

constexpr const char* kTemplate =
    R"(You are an electronic music arranger. Produce one complete multi-track
composition as a single JSON document in the TOMI schema described below.

The document is built from four node types plus composition links:
- section: a temporal division of the song. Fields: name, label (one of
  intro, verse, pre_chorus, chorus, bridge, outro), length_bars. A section
  may appear multiple times in the sequence; every appearance plays
  identical content.
- track: a vertical instrument layer. Fields: name, kind (midi or audio).
  MIDI tracks accept only MIDI clips, audio tracks only audio clips.
- clip: a short music segment described by features; the actual material
  is retrieved from sample databases afterwards. MIDI clip fields: name,
  kind: "midi", content_type (chord, bass, melody, arpeggio), length_bars
  (4, 8, or 16), optional key_root (0-11), mode (major or minor), and
  root_progression (scale degrees 1-7, e.g. [1, 6, 4, 5]). Audio clip
  fields: name, kind: "audio", sample_type (loop or one_shot), keywords
  (lowercase tags such as "drum", "kick", "riser"), and length_bars
  (2, 4, 8, or 16; loops only).
- transformation: how a clip is elaborated before placement. Fields:
  name, subclass (general, drum, or fx), action_sequence, loop_mode
  (once, loop, trim), and alignment (fx only: left or right). The action
  sequence is a string over O (onset), S (sustain), R (rest) on a
  sixteenth-note grid, 16 symbols per bar; it is required for general and
  drum transforms and must be empty for fx transforms. A sustain may only
  follow an onset or another sustain. Example: "ORRRORRRORRRORRR" places a
  drum hit on every beat; "OSSSSSSSSSSSSSSS" holds a chord for a bar.
  fx transforms place risers (alignment right, ending at the section end)
  and fallers (alignment left, starting at the section start) and must use
  loop_mode once or trim.
- composition link: a quadruple {"section": ..., "track": ..., "clip": ...,
  "transformation": ...} placing one transformed clip on one track for
  every appearance of one section. Nodes are reusable across links.

Work strictly in this order: first sections, then tracks, then clips, then
transformations, then composition links. Give every node a unique name and
reference nodes in links by exactly those names. Cover every section of
the sequence; layer multiple tracks per section for a full arrangement.

Respond with ONLY the JSON document, no prose, following this shape:
{
  "version": 1,
  "tempo_bpm": <number>,
  "key_root": <0-11>,
  "key_mode": "major" | "minor",
  "sections": [{"name": "...", "label": "...", "length_bars": <int>}, ...],
  "tracks": [{"name": "...", "kind": "midi" | "audio"}, ...],
  "clips": [<midi or audio clip objects>, ...],
  "transformations": [{"name": "...", "subclass": "...",
                       "action_sequence": "...", "loop_mode": "..."}, ...],
  "section_sequence": ["...", ...],
  "links": [{"section": "...", "track": "...", "clip": "...",
             "transformation": "..."}, ...]
}
)";

}  // namespace

const std::string& iclPromptTemplate() {
  static const std::string text = kTemplate;
  return text;
}

std::string contextProblem(const GenerationContext& ctx) {
  if (ctx.tempo_bpm < 40.0 || ctx.tempo_bpm > 300.0) {
    return "tempo must be within [40, 300] BPM";
  }
  if (ctx.key.root < 0 || ctx.key.root > 11) {
    return "key root must be a pitch class 0-11";
  }
  if (ctx.section_sequence && !ctx.relax_sequence_limits) {
    const auto& sequence = *ctx.section_sequence;
    if (sequence.size() < 8 || sequence.size() > 10) {
      return "fixed sequences use 8-10 sections";
    }
    for (const SectionConstraint& section : sequence) {
      if (section.length_bars < 4 || section.length_bars > 16) {
        return "section lengths use 4-16 bars";
      }
    }
  }
  return "";
}

std::string buildIclPrompt(const GenerationContext& ctx) {
  std::ostringstream out;
  out << iclPromptTemplate();
  out << "\nConstraints for this composition:\n";
  out << "- tempo_bpm must be " << ctx.tempo_bpm << "\n";
  out << "- key_root must be " << ctx.key.root << " with key_mode "
      << toString(ctx.key.mode) << "\n";
  if (ctx.mood) {
    out << "- mood: " << *ctx.mood << "\n";
  }
  if (ctx.section_sequence) {
    out << "- use exactly this section sequence (name label bars):\n";
    for (const SectionConstraint& section : *ctx.section_sequence) {
      out << "    " << section.name << " " << toString(section.label) << " "
          << section.length_bars << "\n";
    }
  } else {
    out << "- invent a full-song section sequence of 8 to 10 sections of 4 to"
           " 16 bars each\n";
  }
  return out.str();
}

}  // namespace tomi
