// The three transformation subclasses: action-sequence retiming for MIDI
// clips, one-shot drum scheduling, fx alignment, and loop/trim fitting.

#pragma once

#include <vector>

#include "tomi/midi/smf.h"

namespace tomi {

struct DrumHit {
  double start_seconds = 0.0;  // relative to the section start
  double gain = 1.0;
  bool operator==(const DrumHit&) const = default;
};

struct FxPlacement {
  double start_seconds = 0.0;      // relative to the section start
  double head_trim_seconds = 0.0;  // source audio dropped before the start
  double region_seconds = 0.0;     // audible span within the section
  bool operator==(const FxPlacement&) const = default;
};

struct LoopSpan {
  int repeat_index = 0;
  int bars_used = 0;
  bool operator==(const LoopSpan&) const = default;
};

/// Retimes a MIDI clip through the transform's action sequence on the
/// sixteenth grid. The sequence tiles across the section (final tile
/// truncated); loop_mode controls how source time maps onto the section:
/// once plays the source from the section start, loop repeats it, trim
/// truncates it to the section first. Onsets trigger the pitches sounding
/// at the mapped source time, sustains extend them one step, rests
/// silence. Accepts general and drum subclasses (both carry sequences);
/// throws on fx or an empty sequence.
MidiClipData applyGeneral(const MidiClipData& clip, const TransformationNode& t,
                          int section_len_bars);

/// One placement per onset step for a one-shot sample; sustains and rests
/// place nothing (one-shots ring naturally). The sequence tiles only when
/// loop_mode == loop. Throws on non-drum transforms.
std::vector<DrumHit> applyDrum(const TransformationNode& t, int section_len_bars,
                               double tempo_bpm);

/// Left alignment starts at the section start; right alignment ends at the
/// section end. A sample longer than the section is trimmed to fit (head
/// trim when right-aligned, tail trim when left-aligned).
FxPlacement applyFx(const TransformationNode& t, int section_len_bars,
                    double tempo_bpm, double sample_duration_seconds);

/// once -> a single span of min(sample, section) bars; loop ->
/// ceil(section/sample) spans with the last truncated; trim -> a single
/// span of min(sample, section) bars.
std::vector<LoopSpan> fitLoop(int sample_len_bars, int section_len_bars,
                              LoopMode loop_mode);

}  // namespace tomi
